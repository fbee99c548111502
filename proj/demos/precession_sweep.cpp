// Sweeps the precession angle for a few schedule lengths and plots the
// reduced Leggett-Garg parameter.

#include <iostream>
#include <string>

#include "qndlg/csv.hpp"
#include "qndlg/grid.hpp"
#include "qndlg/protocol.hpp"
#include "qndlg/svg.hpp"

int main() {
  using namespace qndlg;
  try {
    const PhysicalParams p;
    const auto grid = grid_values(default_grid());

    std::vector<std::vector<std::string>> rows;
    std::vector<PlotSeries> series;
    for (int n : {3, 5, 7, 9}) {
      PlotSeries s;
      s.label = "n=" + std::to_string(n);
      for (const auto& r : sweep_theta(all_performed(n, 0.0, true, true), p, grid)) {
        rows.push_back({format_double(r.theta), std::to_string(r.n),
                        format_double(r.k_value), format_double(r.k_reduced)});
        s.points.push_back({r.theta, r.k_reduced});
      }
      series.push_back(std::move(s));
    }

    write_csv("precession_sweep.csv", {"theta", "n", "k_value", "k_reduced"}, rows);
    write_svg("precession_sweep.svg",
              render_line_plot(series, "precession angle per slot (rad)",
                               "reduced K'_n", "Reduced Leggett-Garg parameter"));
    std::cout << "wrote precession_sweep.csv and precession_sweep.svg\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
