#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qndlg/csv.hpp"
#include "qndlg/dynamics.hpp"
#include "qndlg/grid.hpp"
#include "qndlg/mc.hpp"
#include "qndlg/protocol.hpp"
#include "qndlg/svg.hpp"

namespace {

struct Options {
  qndlg::PhysicalParams params;
  std::string n_list;  // empty = per-command default
  std::string theta;
  std::string theta_grid;
  bool no_back_action = false;
  bool no_scattering = false;
  std::uint64_t seed = 12345;
  std::uint64_t samples = 1000000;
  std::string out;
  std::string mask_semantics = "optimized";
};

std::vector<int> parse_n_list(const std::string& s) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    std::string_view item(s.data() + start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    int n = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), n);
    if (ec != std::errc{} || ptr != item.data() + item.size())
      throw qndlg::ParameterError("--n expects a comma-separated list of integers, got '" +
                                  std::string(item) + "'");
    if (n < 3 || n > qndlg::kMaxOptimizedSlots)
      throw qndlg::ParameterError("--n values must lie in [3, 12]");
    out.push_back(n);
    start = comma + 1;
  }
  return out;
}

std::vector<double> resolve_grid(const Options& o) {
  if (!o.theta.empty()) return {qndlg::parse_angle(o.theta)};
  if (!o.theta_grid.empty())
    return qndlg::grid_values(qndlg::parse_grid(o.theta_grid));
  return qndlg::grid_values(qndlg::default_grid());
}

std::string fmt(double v) { return qndlg::format_double(v); }

int cmd_sweep(const Options& o) {
  const std::vector<int> ns = parse_n_list(o.n_list.empty() ? "3,5,7,9" : o.n_list);
  const std::vector<double> grid = resolve_grid(o);
  const qndlg::MaskSemantics sem = qndlg::parse_mask_semantics(o.mask_semantics);
  const bool ba = !o.no_back_action, sc = !o.no_scattering;
  std::vector<std::vector<std::string>> rows;
  rows.reserve(ns.size() * grid.size());
  for (int n : ns) {
    const qndlg::SequenceSpec tmpl = qndlg::all_performed(n, 0.0, ba, sc);
    const auto block = qndlg::sweep_theta(tmpl, o.params, grid, sem);
    double best = block.front().k_reduced, best_theta = block.front().theta;
    for (const auto& r : block) {
      rows.push_back({fmt(r.theta), std::to_string(r.n), fmt(r.k_value),
                      fmt(r.k_reduced), r.back_action ? "1" : "0",
                      r.scattering ? "1" : "0"});
      if (r.k_reduced < best) {
        best = r.k_reduced;
        best_theta = r.theta;
      }
    }
    std::cout << "n=" << n << ": min K'_" << n << " = " << best
              << " at theta = " << best_theta << " rad\n";
  }
  const std::filesystem::path out = o.out.empty() ? "sweep.csv" : o.out;
  qndlg::write_csv(out,
                   {"theta", "n", "k_value", "k_reduced", "back_action", "scattering"},
                   rows);
  std::cout << "wrote " << out.string() << " (" << rows.size() << " rows)\n";
  return 0;
}

int cmd_triple(const Options& o) {
  const std::vector<int> ns = parse_n_list(o.n_list.empty() ? "7" : o.n_list);
  const std::vector<double> grid = resolve_grid(o);
  const bool ba = !o.no_back_action, sc = !o.no_scattering;
  std::vector<std::vector<std::string>> rows;
  rows.reserve(ns.size() * grid.size());
  for (int n : ns) {
    const auto block = qndlg::sweep_triple(n, o.params, grid, ba, sc);
    const auto* best = &block.front();
    for (const auto& r : block) {
      rows.push_back({fmt(r.theta), std::to_string(r.n), fmt(r.result.k3),
                      std::to_string(r.result.triple[0]),
                      std::to_string(r.result.triple[1]),
                      std::to_string(r.result.triple[2]),
                      qndlg::mask_to_string(r.result.masks[0], n),
                      qndlg::mask_to_string(r.result.masks[1], n),
                      qndlg::mask_to_string(r.result.masks[2], n),
                      r.back_action ? "1" : "0", r.scattering ? "1" : "0"});
      if (r.result.k3 < best->result.k3) best = &r;
    }
    std::cout << "n=" << n << ": min K_3 = " << best->result.k3 << " at theta = "
              << best->theta << " rad, triple (" << best->result.triple[0] << ","
              << best->result.triple[1] << "," << best->result.triple[2] << ")\n";
  }
  const std::filesystem::path out = o.out.empty() ? "triple.csv" : o.out;
  qndlg::write_csv(out,
                   {"theta", "n", "k3", "a", "b", "c", "mask_ab", "mask_bc",
                    "mask_ac", "back_action", "scattering"},
                   rows);
  std::cout << "wrote " << out.string() << " (" << rows.size() << " rows)\n";
  return 0;
}

int cmd_audit(const Options& o) {
  const bool ba = !o.no_back_action;
  const auto with_sc = qndlg::disturbance_audit(o.params, ba);
  qndlg::PhysicalParams ideal = o.params;
  ideal.eta = 0.0;
  const auto without_sc = qndlg::disturbance_audit(ideal, ba);
  std::cout << "two-pulse disturbance audit (zero rotation between pulses, back action "
            << (ba ? "on" : "off") << ")\n";
  std::cout << "scattering on  (eta=" << fmt(o.params.eta)
            << "): mean_diff=" << fmt(with_sc.mean_diff)
            << " var_diff=" << fmt(with_sc.var_diff) << "\n";
  std::cout << "scattering off (eta=0): mean_diff=" << fmt(without_sc.mean_diff)
            << " var_diff=" << fmt(without_sc.var_diff) << "\n";
  return 0;
}

bool report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
  return ok;
}

int cmd_oracle_check(const Options& o) {
  bool all = true;
  const std::uint64_t seed = o.seed;

  {  // analytic sign correlator vs direct sampling
    std::mt19937_64 rng(qndlg::chunk_seed(seed, 1001));
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < 100; ++i) {
      const double a = std::exp(normal(rng));
      const double c = std::exp(normal(rng));
      const double rho = std::tanh(normal(rng));
      const double b = rho * std::sqrt(a * c);
      Eigen::Matrix2d gamma;
      gamma << a, b, b, c;
      const double exact = qndlg::corr_sign(a, b, c);
      const auto est = qndlg::mc_sign_corr(gamma, o.samples,
                                           qndlg::chunk_seed(seed, 2000 + i));
      const double ratio = std::abs(exact - est.value) / est.std_error;
      worst = std::max(worst, ratio);
      if (ratio > 4.0) ok = false;
    }
    all &= report("corr_sign vs sampling", ok,
                  "100 random PSD matrices, worst |diff| = " +
                      std::to_string(worst) + " std errors (limit 4)");
  }

  {  // arcsine point rho = 1/2 -> 1/3
    const std::uint64_t n = std::max<std::uint64_t>(o.samples, 10000000ull);
    Eigen::Matrix2d gamma;
    gamma << 1.0, 0.5, 0.5, 1.0;
    const auto est = qndlg::mc_sign_corr(gamma, n, qndlg::chunk_seed(seed, 7));
    const double diff = std::abs(est.value - 1.0 / 3.0);
    all &= report("arcsine point rho=1/2", diff <= 1e-3,
                  "|estimate - 1/3| = " + std::to_string(diff) + " at " +
                      std::to_string(n) + " samples (limit 1e-3)");
  }

  {  // classical model never violates the inequality
    const int ns[] = {3, 5, 7, 9};
    const double thetas[] = {0.3, std::numbers::pi / 2.0, 2.1,
                             0.9 * std::numbers::pi, 1.7 * std::numbers::pi};
    const double noises[] = {0.0, qndlg::classical_readout_noise(o.params), 5e4, 1e6};
    double worst = 1e300;
    bool ok = true;
    int idx = 0;
    for (int n : ns)
      for (double th : thetas) {
        const double noise = noises[idx % 4];
        const auto est = qndlg::mc_macrorealist_kn(
            n, th, noise, o.samples, qndlg::chunk_seed(seed, 3000 + idx));
        const double margin = est.value + 3.0 * est.std_error;
        worst = std::min(worst, margin);
        if (margin < 0.0) ok = false;
        ++idx;
      }
    all &= report("macrorealist K_n bound", ok,
                  "20 settings, worst K_n + 3 se = " + std::to_string(worst) +
                      " (must be >= 0)");
  }

  {  // classical pair correlators do not depend on the schedule
    const int n = 5, a = 2, c = 4;
    const double th = 0.9;
    const double noise = qndlg::classical_readout_noise(o.params);
    const std::vector<std::vector<bool>> masks = {
        {true, true, true, true, true},
        {false, true, false, true, false},
        {false, true, true, true, false}};
    std::vector<qndlg::McEstimate> est;
    for (std::size_t i = 0; i < masks.size(); ++i)
      est.push_back(qndlg::mc_macrorealist_corr(
          n, th, noise, masks[i], a, c, o.samples,
          qndlg::chunk_seed(seed, 4000 + static_cast<std::uint64_t>(i))));
    double worst = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < est.size(); ++i)
      for (std::size_t j = i + 1; j < est.size(); ++j) {
        const double sigma = std::sqrt(est[i].std_error * est[i].std_error +
                                       est[j].std_error * est[j].std_error);
        const double ratio = std::abs(est[i].value - est[j].value) / sigma;
        worst = std::max(worst, ratio);
        if (ratio > 3.0) ok = false;
      }
    all &= report("mask independence", ok,
                  "independent runs over 3 schedules, worst gap = " +
                      std::to_string(worst) + " sigma (limit 3)");
  }

  {  // covariance pipeline vs per-sample linear propagation
    const qndlg::SequenceSpec spec =
        qndlg::all_performed(3, 0.7, !o.no_back_action, !o.no_scattering);
    const Eigen::MatrixXd cov_hat =
        qndlg::sample_sequence_cov(spec, o.params, o.samples,
                                   qndlg::chunk_seed(seed, 9));
    qndlg::CollectiveState st = qndlg::init_state(o.params, 3);
    for (int slot = 1; slot <= 3; ++slot) {
      if (slot > 1) qndlg::rotate_in_place(st, spec.theta);
      qndlg::pulse_step_in_place(st, o.params, spec.back_action_on,
                                 spec.scattering_on);
    }
    const double N = static_cast<double>(o.samples);
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < st.dim(); ++i)
      for (int j = 0; j <= i; ++j) {
        const double se = std::sqrt(
            (st.cov(i, i) * st.cov(j, j) + st.cov(i, j) * st.cov(i, j)) / N);
        const double ratio = std::abs(cov_hat(i, j) - st.cov(i, j)) / se;
        worst = std::max(worst, ratio);
        if (ratio > 5.0) ok = false;
      }
    all &= report("sequence covariance vs sampling", ok,
                  "n=3 schedule, worst entry gap = " + std::to_string(worst) +
                      " std errors (limit 5)");
  }

  std::cout << (all ? "oracle-check: all checks passed\n"
                    : "oracle-check: FAILURES above\n");
  return all ? 0 : 2;
}

int cmd_plot(const Options& o, const std::string& csv_path) {
  const qndlg::CsvTable table = qndlg::read_csv(csv_path);
  const int col_theta = table.column("theta");
  const int col_n = table.column("n");
  int col_y = table.column("k_reduced");
  bool triple = false;
  if (col_y < 0) {
    col_y = table.column("k3");
    triple = true;
  }
  if (col_theta < 0 || col_n < 0 || col_y < 0)
    throw qndlg::ParseError(csv_path +
                            ":1: need columns theta, n, and k_reduced or k3");
  const int col_ba = table.column("back_action");
  const int col_sc = table.column("scattering");

  std::vector<qndlg::PlotSeries> series;
  std::map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::size_t line = r + 2;
    const auto& row = table.rows[r];
    const double th = qndlg::parse_csv_double(row[static_cast<std::size_t>(col_theta)],
                                              line, csv_path);
    const double y = qndlg::parse_csv_double(row[static_cast<std::size_t>(col_y)],
                                             line, csv_path);
    const std::string n_str = row[static_cast<std::size_t>(col_n)];
    const std::string ba = col_ba >= 0 ? row[static_cast<std::size_t>(col_ba)] : "1";
    const std::string sc = col_sc >= 0 ? row[static_cast<std::size_t>(col_sc)] : "1";
    std::string label = "n=" + n_str;
    if (ba == "0") label += ", no BA";
    if (sc == "0") label += ", no scatter";
    auto [it, fresh] = index.try_emplace(label, series.size());
    if (fresh) series.push_back({label, {}});
    series[it->second].points.emplace_back(th, y);
  }
  const std::string svg = qndlg::render_line_plot(
      series, "precession angle per slot (rad)",
      triple ? "optimized K_3" : "reduced K'_n",
      triple ? "Three-point LGI within longer schedules"
             : "Reduced Leggett-Garg parameter");
  std::filesystem::path out = o.out.empty()
                                  ? std::filesystem::path(csv_path).replace_extension(".svg")
                                  : std::filesystem::path(o.out);
  qndlg::write_svg(out, svg);
  std::cout << "wrote " << out.string() << " (" << series.size() << " series)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  std::string plot_csv;

  CLI::App app{"Collective-spin QND probing and Leggett-Garg analysis"};
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "key=value config file, # for comments");
  app.add_option("--g", o.params.g, "coupling constant per pulse");
  app.add_option("--na", o.params.n_atoms, "atom number N_A");
  app.add_option("--nl", o.params.n_photons, "photons per pulse N_L");
  app.add_option("--eta", o.params.eta, "per-photon scattering parameter");
  app.add_option("--n", o.n_list, "slot counts, comma separated, each in [3,12]");
  app.add_option("--theta", o.theta, "single precession angle ('0.5pi' or radians)")
      ->excludes(app.add_option("--theta-grid", o.theta_grid,
                                "angle grid START:STOP:POINTS"));
  app.add_flag("--no-back-action", o.no_back_action, "disable measurement back action");
  app.add_flag("--no-scattering", o.no_scattering, "disable the scattering channel");
  app.add_option("--seed", o.seed, "base seed for sampling commands");
  app.add_option("--samples", o.samples, "samples per Monte Carlo estimate");
  app.add_option("--out", o.out, "output file path");
  app.add_option("--mask-semantics", o.mask_semantics,
                 "correlator schedule rule for sweep")
      ->check(CLI::IsMember({"optimized", "as_performed", "pair_only"}))
      ->group("Advanced");

  CLI::App* sweep = app.add_subcommand("sweep", "K'_n over a theta grid, CSV out");
  CLI::App* triple = app.add_subcommand("triple", "best K_3 per theta, CSV out");
  CLI::App* audit = app.add_subcommand("audit", "two-pulse disturbance report");
  CLI::App* oracle = app.add_subcommand("oracle-check",
                                        "analytic results vs Monte Carlo sampling");
  CLI::App* plot = app.add_subcommand("plot", "render a sweep/triple CSV as SVG");
  plot->add_option("csv", plot_csv, "CSV file produced by sweep or triple")->required();
  for (CLI::App* sub : {sweep, triple, audit, oracle, plot}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    o.params.validate();
    if (app.got_subcommand(sweep)) return cmd_sweep(o);
    if (app.got_subcommand(triple)) return cmd_triple(o);
    if (app.got_subcommand(audit)) return cmd_audit(o);
    if (app.got_subcommand(oracle)) return cmd_oracle_check(o);
    return cmd_plot(o, plot_csv);
  } catch (const qndlg::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
