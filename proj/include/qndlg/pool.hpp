#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qndlg {

// Worker count: hardware concurrency, capped by the QND_LG_THREADS
// environment variable when set to a positive integer.
inline unsigned worker_count(std::size_t items) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("QND_LG_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      hw = std::min<unsigned long>(hw, static_cast<unsigned long>(v));
  }
  return static_cast<unsigned>(
      std::min<std::size_t>(hw, std::max<std::size_t>(items, 1)));
}

// Runs f(i) for i in [0, n). Each index writes only its own output slot, so
// results are identical for any worker count. First exception is rethrown.
template <class F>
inline void parallel_for(std::size_t n, F&& f) {
  if (n == 0) return;
  const unsigned workers = worker_count(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace qndlg
