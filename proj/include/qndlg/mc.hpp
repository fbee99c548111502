#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qndlg/pool.hpp"
#include "qndlg/sequence.hpp"

namespace qndlg {

// Monte-Carlo verifiers, independent of the analytic covariance pipeline.
// Sampling is split into fixed-size chunks; each chunk owns a generator
// seeded from (seed, chunk index) and partial results merge in chunk order,
// so estimates are bitwise reproducible on one platform for any worker count.

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) {
  return splitmix64(splitmix64(seed) ^ splitmix64(chunk ^ 0x632be59bd9b4e019ULL));
}

inline constexpr std::uint64_t kMcChunk = 1ull << 16;

namespace detail {

template <class PerChunk>
inline void run_chunks(std::uint64_t n_samples, PerChunk&& per_chunk) {
  const std::uint64_t n_chunks = (n_samples + kMcChunk - 1) / kMcChunk;
  parallel_for(static_cast<std::size_t>(n_chunks), [&](std::size_t c) {
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * kMcChunk;
    const std::uint64_t count = std::min(kMcChunk, n_samples - begin);
    per_chunk(static_cast<std::uint64_t>(c), count);
  });
}

}  // namespace detail

// Empirical <sgn(y1) sgn(y2)> for a zero-mean bivariate Gaussian.
inline McEstimate mc_sign_corr(const Eigen::Matrix2d& gamma,
                               std::uint64_t n_samples, std::uint64_t seed) {
  if (n_samples < 1000)
    throw ParameterError("mc_sign_corr needs at least 1000 samples");
  const double a = gamma(0, 0), b = gamma(0, 1), c = gamma(1, 1);
  if (!(a > 0.0) || !(c > 0.0) || b * b > a * c * (1.0 + 1e-9))
    throw DomainError("mc_sign_corr needs a PSD matrix");
  const double sa = std::sqrt(a);
  const double slope = b / sa;
  const double resid = std::sqrt(std::max(0.0, c - slope * slope));
  const std::uint64_t n_chunks = (n_samples + kMcChunk - 1) / kMcChunk;
  std::vector<std::int64_t> partial(static_cast<std::size_t>(n_chunks), 0);
  detail::run_chunks(n_samples, [&](std::uint64_t chunk, std::uint64_t count) {
    std::mt19937_64 rng(chunk_seed(seed, chunk));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::int64_t sum = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      const double u = normal(rng);
      const double y1 = sa * u;
      const double y2 = slope * u + resid * normal(rng);
      sum += ((y1 >= 0.0) == (y2 >= 0.0)) ? 1 : -1;
    }
    partial[static_cast<std::size_t>(chunk)] = sum;
  });
  std::int64_t total = 0;
  for (std::int64_t s : partial) total += s;
  const double m = static_cast<double>(total) / static_cast<double>(n_samples);
  const double se =
      std::sqrt(std::max(0.0, 1.0 - m * m) / static_cast<double>(n_samples));
  return {m, se, n_samples, seed};
}

// Factor of gamma for sampling; eigenvalues below the PSD tolerance raise,
// small negatives from rounding clamp to zero.
inline Eigen::MatrixXd sampling_factor(const Eigen::MatrixXd& gamma) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma);
  Eigen::VectorXd lam = es.eigenvalues();
  const double floor_tol = -1e-9 * gamma.trace();
  for (int i = 0; i < lam.size(); ++i) {
    if (lam(i) < floor_tol)
      throw DomainError("covariance is not positive semidefinite");
    lam(i) = std::max(lam(i), 0.0);
  }
  return es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
}

// Samples the joint readout Gaussian, dichotomizes, and averages the pair
// statistic sum_{i<j} q_i q_j + floor(n/2).
inline McEstimate mc_gaussian_kn(const MeasurementRecord& rec,
                                 std::uint64_t n_samples, std::uint64_t seed) {
  rec.validate();
  const int n = rec.size();
  if (n < 2) throw ParameterError("mc_gaussian_kn needs >= 2 readouts");
  if (n_samples < 1000)
    throw ParameterError("mc_gaussian_kn needs at least 1000 samples");
  const Eigen::MatrixXd L = sampling_factor(rec.gamma_y);
  const std::uint64_t n_chunks = (n_samples + kMcChunk - 1) / kMcChunk;
  std::vector<std::int64_t> psum(static_cast<std::size_t>(n_chunks), 0);
  std::vector<std::int64_t> psum2(static_cast<std::size_t>(n_chunks), 0);
  detail::run_chunks(n_samples, [&](std::uint64_t chunk, std::uint64_t count) {
    std::mt19937_64 rng(chunk_seed(seed, chunk));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(n);
    std::int64_t sum = 0, sum2 = 0;
    for (std::uint64_t it = 0; it < count; ++it) {
      for (int k = 0; k < n; ++k) z(k) = normal(rng);
      const Eigen::VectorXd y = L * z;
      int s = 0;
      for (int i = 0; i < n; ++i) {
        const int qi = (y(i) >= 0.0) ? 1 : -1;
        for (int j = 0; j < i; ++j) {
          const int qj = (y(j) >= 0.0) ? 1 : -1;
          s += qi * qj;
        }
      }
      sum += s;
      sum2 += static_cast<std::int64_t>(s) * s;
    }
    psum[static_cast<std::size_t>(chunk)] = sum;
    psum2[static_cast<std::size_t>(chunk)] = sum2;
  });
  std::int64_t total = 0, total2 = 0;
  for (std::size_t i = 0; i < psum.size(); ++i) {
    total += psum[i];
    total2 += psum2[i];
  }
  const double N = static_cast<double>(n_samples);
  const double mean_s = static_cast<double>(total) / N;
  const double var_s =
      std::max(0.0, static_cast<double>(total2) / N - mean_s * mean_s);
  return {mean_s + std::floor(n / 2.0), std::sqrt(var_s / N), n_samples, seed};
}

// Default classical readout-noise variance: light shot noise referred to the
// J_z axis, (N_L/4) / (g N_L/2)^2.
inline double classical_readout_noise(const PhysicalParams& p) {
  const double gain = p.g * p.n_photons / 2.0;
  return (p.n_photons / 4.0) / (gain * gain);
}

namespace detail {

// Classical twin of the experiment: a spin vector with Gaussian transverse
// components precesses deterministically; every slot is read non-invasively
// through additive Gaussian readout noise.
template <class PerSample>
inline void macrorealist_samples(int n, double theta, double noise_var,
                                 double spin_var, std::uint64_t n_samples,
                                 std::uint64_t seed, PerSample&& per_sample) {
  const double spin_sd = std::sqrt(spin_var);
  const double noise_sd = std::sqrt(noise_var);
  std::vector<double> cs(static_cast<std::size_t>(n)),
      sn(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    cs[static_cast<std::size_t>(i)] = std::cos(i * theta);
    sn[static_cast<std::size_t>(i)] = std::sin(i * theta);
  }
  run_chunks(n_samples, [&](std::uint64_t chunk, std::uint64_t count) {
    std::mt19937_64 rng(chunk_seed(seed, chunk));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<int> q(static_cast<std::size_t>(n));
    for (std::uint64_t it = 0; it < count; ++it) {
      const double jy = spin_sd * normal(rng);
      const double jz = spin_sd * normal(rng);
      for (int i = 0; i < n; ++i) {
        const double z = jy * sn[static_cast<std::size_t>(i)] +
                         jz * cs[static_cast<std::size_t>(i)] +
                         noise_sd * normal(rng);
        q[static_cast<std::size_t>(i)] = (z >= 0.0) ? 1 : -1;
      }
      per_sample(chunk, q);
    }
  });
}

}  // namespace detail

inline McEstimate mc_macrorealist_kn(int n, double theta, double noise_var,
                                     std::uint64_t n_samples,
                                     std::uint64_t seed,
                                     double spin_var = 5e5) {
  if (n < 3) throw ParameterError("macrorealist K_n needs n >= 3");
  if (!(noise_var >= 0.0))
    throw ParameterError("readout noise variance must be >= 0");
  if (n_samples < 1000)
    throw ParameterError("mc_macrorealist_kn needs at least 1000 samples");
  const std::uint64_t n_chunks = (n_samples + kMcChunk - 1) / kMcChunk;
  std::vector<std::int64_t> psum(static_cast<std::size_t>(n_chunks), 0);
  std::vector<std::int64_t> psum2(static_cast<std::size_t>(n_chunks), 0);
  detail::macrorealist_samples(
      n, theta, noise_var, spin_var, n_samples, seed,
      [&](std::uint64_t chunk, const std::vector<int>& q) {
        int s = 0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < i; ++j)
            s += q[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(j)];
        psum[static_cast<std::size_t>(chunk)] += s;
        psum2[static_cast<std::size_t>(chunk)] +=
            static_cast<std::int64_t>(s) * s;
      });
  std::int64_t total = 0, total2 = 0;
  for (std::size_t i = 0; i < psum.size(); ++i) {
    total += psum[i];
    total2 += psum2[i];
  }
  const double N = static_cast<double>(n_samples);
  const double mean_s = static_cast<double>(total) / N;
  const double var_s =
      std::max(0.0, static_cast<double>(total2) / N - mean_s * mean_s);
  return {mean_s + std::floor(n / 2.0), std::sqrt(var_s / N), n_samples, seed};
}

// Pair correlator of the classical model. Reading other slots cannot disturb
// a classical spin, so the mask only needs to contain the pair; estimates for
// different masks differ only by their sampling noise.
inline McEstimate mc_macrorealist_corr(int n, double theta, double noise_var,
                                       const std::vector<bool>& mask, int a,
                                       int c, std::uint64_t n_samples,
                                       std::uint64_t seed,
                                       double spin_var = 5e5) {
  if (n < 2 || a < 1 || c < 1 || a >= c || c > n)
    throw ParameterError("macrorealist pair needs 1 <= a < c <= n");
  if (static_cast<int>(mask.size()) != n)
    throw ParameterError("mask length must equal n");
  if (!mask[static_cast<std::size_t>(a - 1)] ||
      !mask[static_cast<std::size_t>(c - 1)])
    throw ParameterError("mask must contain the requested pair");
  if (n_samples < 1000)
    throw ParameterError("mc_macrorealist_corr needs at least 1000 samples");
  const std::uint64_t n_chunks = (n_samples + kMcChunk - 1) / kMcChunk;
  std::vector<std::int64_t> psum(static_cast<std::size_t>(n_chunks), 0);
  detail::macrorealist_samples(
      n, theta, noise_var, spin_var, n_samples, seed,
      [&](std::uint64_t chunk, const std::vector<int>& q) {
        psum[static_cast<std::size_t>(chunk)] +=
            q[static_cast<std::size_t>(a - 1)] *
            q[static_cast<std::size_t>(c - 1)];
      });
  std::int64_t total = 0;
  for (std::int64_t s : psum) total += s;
  const double m = static_cast<double>(total) / static_cast<double>(n_samples);
  const double se =
      std::sqrt(std::max(0.0, 1.0 - m * m) / static_cast<double>(n_samples));
  return {m, se, n_samples, seed};
}

// Propagates samples through the per-sample linear relations of a schedule
// (the sample-level image of the analytic covariance updates) and returns the
// empirical covariance of the final state vector. Dimension and variable
// order match the state run_sequence evolves.
inline Eigen::MatrixXd sample_sequence_cov(const SequenceSpec& spec,
                                           const PhysicalParams& p,
                                           std::uint64_t n_samples,
                                           std::uint64_t seed) {
  spec.validate();
  p.validate();
  if (n_samples < 1000)
    throw ParameterError("sample_sequence_cov needs at least 1000 samples");
  const int n_fired = spec.fired_count();
  const int d = 2 + 2 * n_fired;
  const double chi = p.chi();
  const double noise_sd =
      std::sqrt(p.n_atoms * (1.0 - chi) * (chi / 2.0 + 2.0 / 3.0));
  const double spin_sd = std::sqrt(p.n_atoms / 2.0);
  const double light_sd = std::sqrt(p.n_photons / 4.0);
  const double a_coef = p.g * (p.n_photons / 2.0);
  const double b_coef = p.g * p.n_atoms;
  const double ct = std::cos(spec.theta), st = std::sin(spec.theta);
  const std::uint64_t n_chunks = (n_samples + kMcChunk - 1) / kMcChunk;
  std::vector<Eigen::MatrixXd> pmat(static_cast<std::size_t>(n_chunks));
  std::vector<Eigen::VectorXd> pvec(static_cast<std::size_t>(n_chunks));
  detail::run_chunks(n_samples, [&](std::uint64_t chunk, std::uint64_t count) {
    std::mt19937_64 rng(chunk_seed(seed, chunk));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd accv = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd v(d);
    for (std::uint64_t it = 0; it < count; ++it) {
      v(0) = spin_sd * normal(rng);
      v(1) = spin_sd * normal(rng);
      for (int m = 0; m < n_fired; ++m) {
        v(2 + 2 * m) = light_sd * normal(rng);
        v(3 + 2 * m) = light_sd * normal(rng);
      }
      int used = 0;
      for (int slot = 1; slot <= spec.n_slots; ++slot) {
        if (slot > 1) {
          const double jy = v(0), jz = v(1);
          v(0) = ct * jy - st * jz;
          v(1) = st * jy + ct * jz;
        }
        if (spec.performed[static_cast<std::size_t>(slot - 1)]) {
          const int sy = 2 + 2 * used, sz = 3 + 2 * used;
          v(sy) += a_coef * v(1);
          if (spec.back_action_on) v(0) += b_coef * v(sz);
          ++used;
          if (spec.scattering_on && chi != 1.0) {
            v(0) = chi * v(0) + noise_sd * normal(rng);
            v(1) = chi * v(1) + noise_sd * normal(rng);
          }
        }
      }
      acc.noalias() += v * v.transpose();
      accv += v;
    }
    pmat[static_cast<std::size_t>(chunk)] = acc;
    pvec[static_cast<std::size_t>(chunk)] = accv;
  });
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd first = Eigen::VectorXd::Zero(d);
  for (std::size_t i = 0; i < pmat.size(); ++i) {
    second += pmat[i];
    first += pvec[i];
  }
  const double N = static_cast<double>(n_samples);
  second /= N;
  first /= N;
  return second - first * first.transpose();
}

}  // namespace qndlg
