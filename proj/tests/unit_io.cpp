#include <catch2/catch_amalgamated.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "qndlg/csv.hpp"
#include "qndlg/grid.hpp"
#include "qndlg/pool.hpp"
#include "qndlg/svg.hpp"

using namespace qndlg;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("qndlg-io-" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("angle parsing accepts radians and multiples of pi") {
  CHECK_THAT(parse_angle("0.5pi"), WithinRel(std::numbers::pi / 2.0, 1e-15));
  CHECK_THAT(parse_angle("pi"), WithinRel(std::numbers::pi, 1e-15));
  CHECK_THAT(parse_angle("-pi"), WithinRel(-std::numbers::pi, 1e-15));
  CHECK_THAT(parse_angle("2PI"), WithinRel(2.0 * std::numbers::pi, 1e-15));
  CHECK_THAT(parse_angle(" 0.25pi "), WithinRel(std::numbers::pi / 4.0, 1e-15));
  CHECK(parse_angle("1.5") == 1.5);
  CHECK(parse_angle("0") == 0.0);
  CHECK(parse_angle("-2.25") == -2.25);
  CHECK_THROWS_AS(parse_angle(""), ParameterError);
  CHECK_THROWS_AS(parse_angle("abc"), ParameterError);
  CHECK_THROWS_AS(parse_angle("1.2.3"), ParameterError);
  CHECK_THROWS_AS(parse_angle("pi2"), ParameterError);
}

TEST_CASE("grid parsing") {
  const ThetaGrid g = parse_grid("0.25pi:pi:5");
  CHECK_THAT(g.start, WithinRel(std::numbers::pi / 4.0, 1e-15));
  CHECK_THAT(g.stop, WithinRel(std::numbers::pi, 1e-15));
  CHECK(g.points == 5);
  CHECK_THROWS_AS(parse_grid("1:2"), ParameterError);
  CHECK_THROWS_AS(parse_grid("1:2:3:4"), ParameterError);
  CHECK_THROWS_AS(parse_grid("1:2:0"), ParameterError);
  CHECK_THROWS_AS(parse_grid("1:2:x"), ParameterError);
}

TEST_CASE("grid values are inclusive and hit the endpoints exactly") {
  const std::vector<double> v = grid_values(parse_grid("1:3:5"));
  REQUIRE(v.size() == 5);
  CHECK(v.front() == 1.0);
  CHECK(v.back() == 3.0);
  CHECK_THAT(v[2], WithinRel(2.0, 1e-15));

  const std::vector<double> single = grid_values(parse_grid("0.5pi:0.7pi:1"));
  REQUIRE(single.size() == 1);
  CHECK_THAT(single[0], WithinRel(std::numbers::pi / 2.0, 1e-15));
}

TEST_CASE("default grid covers a full turn in 512 steps") {
  const ThetaGrid g = default_grid();
  CHECK(g.points == 512);
  const std::vector<double> v = grid_values(g);
  REQUIRE(v.size() == 512);
  const double two_pi = 2.0 * std::numbers::pi;
  CHECK_THAT(v.front(), WithinRel(two_pi / 512.0, 1e-12));
  CHECK(v.back() == two_pi);
  CHECK_THAT(v[255], WithinRel(std::numbers::pi, 1e-12));
}

TEST_CASE("doubles survive a CSV round trip exactly") {
  const fs::path dir = fresh_dir("roundtrip");
  const fs::path file = dir / "t.csv";
  const double values[] = {std::numbers::pi, 1.0 / 3.0, -0.185305800280238,
                           1e-300, 6.02214076e23, -0.0};
  std::vector<std::vector<std::string>> rows;
  for (double v : values) rows.push_back({format_double(v)});
  write_csv(file, {"x"}, rows);

  const CsvTable table = read_csv(file);
  REQUIRE(table.header == std::vector<std::string>{"x"});
  REQUIRE(table.rows.size() == std::size(values));
  for (std::size_t i = 0; i < std::size(values); ++i) {
    const double back = parse_csv_double(table.rows[i][0], i + 2, file.string());
    CHECK(back == values[i]);
  }
  CHECK(table.column("x") == 0);
  CHECK(table.column("y") == -1);
}

TEST_CASE("CSV writer is atomic and leaves no temp files") {
  const fs::path dir = fresh_dir("atomic");
  const fs::path file = dir / "out.csv";
  write_csv(file, {"a", "b"}, {{"1", "2"}, {"3", "4"}});
  int entries = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    ++entries;
    CHECK(e.path() == file);
  }
  CHECK(entries == 1);
  CHECK(slurp(file) == "a,b\n1,2\n3,4\n");
}

TEST_CASE("CSV writer rejects ragged rows and bad targets") {
  const fs::path dir = fresh_dir("badwrite");
  CHECK_THROWS_AS(write_csv(dir / "x.csv", {"a", "b"}, {{"1"}}), ParameterError);
  CHECK_THROWS_AS(write_csv(dir / "no-such-subdir" / "x.csv", {"a"}, {{"1"}}),
                  IoError);
}

TEST_CASE("CSV reader reports 1-based line numbers") {
  const fs::path dir = fresh_dir("badread");
  const fs::path file = dir / "bad.csv";
  {
    std::ofstream out(file);
    out << "a,b\n1,2\n3\n";
  }
  try {
    read_csv(file);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK_THAT(e.what(), ContainsSubstring(":3:"));
  }
  CHECK_THROWS_AS(read_csv(dir / "missing.csv"), IoError);

  try {
    parse_csv_double("12x", 7, "f.csv");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK_THAT(e.what(), ContainsSubstring("f.csv:7:"));
  }
}

TEST_CASE("line plots render axes, series, and legend") {
  std::vector<PlotSeries> series(2);
  series[0].label = "n=3";
  series[1].label = "n=9";
  for (int k = 1; k <= 96; ++k) {
    const double th = k * 2.0 * std::numbers::pi / 96.0;
    series[0].points.emplace_back(th, std::cos(th));
    series[1].points.emplace_back(th, -0.2 + 0.1 * std::cos(2 * th));
  }
  const std::string svg = render_line_plot(series, "theta", "K", "demo");
  CHECK_THAT(svg, ContainsSubstring("<svg"));
  CHECK_THAT(svg, ContainsSubstring("<polyline"));
  CHECK_THAT(svg, ContainsSubstring("n=3"));
  CHECK_THAT(svg, ContainsSubstring("n=9"));
  CHECK_THAT(svg, ContainsSubstring("\xCF\x80"));      // pi tick labels
  CHECK_THAT(svg, ContainsSubstring("stroke-dasharray"));  // zero line

  const fs::path dir = fresh_dir("svg");
  write_svg(dir / "plot.svg", svg);
  CHECK(slurp(dir / "plot.svg") == svg);
}

TEST_CASE("a single point still renders as a visible marker") {
  std::vector<PlotSeries> series(1);
  series[0].label = "n=5";
  series[0].points.emplace_back(std::numbers::pi / 2.0, -0.05);
  const std::string svg = render_line_plot(series, "theta", "K", "point");
  CHECK_THAT(svg, ContainsSubstring("<circle"));
  CHECK_THAT(svg, ContainsSubstring("n=5"));
  CHECK_THROWS_AS(render_line_plot({}, "x", "y", "t"), ParameterError);
}

TEST_CASE("worker count respects the environment cap") {
  setenv("QND_LG_THREADS", "3", 1);
  CHECK(worker_count(100) <= 3);
  CHECK(worker_count(100) >= 1);
  setenv("QND_LG_THREADS", "not-a-number", 1);
  CHECK(worker_count(100) >= 1);
  setenv("QND_LG_THREADS", "0", 1);
  CHECK(worker_count(100) >= 1);
  unsetenv("QND_LG_THREADS");
  CHECK(worker_count(1) == 1);
  CHECK(worker_count(2) <= 2);
}
