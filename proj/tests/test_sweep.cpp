#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "phonon/analytic.hpp"
#include "phonon/sweep.hpp"
#include "test_util.hpp"

using namespace phonon;
using phonon::test::error_of;

namespace {

SweepSpec small_spec() {
  SweepSpec spec;
  spec.name = "small";
  spec.axes = {Axis::range("delta_p", -1.0, 1.0, 3)};
  spec.outputs = {Output::g2_numeric, Output::g2_analytic, Output::fidelity, Output::residual};
  return spec;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "phonon_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("axis construction") {
  const Axis lin = Axis::range("g", 0.0, 1.0, 5);
  CHECK(lin.values == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  const Axis lg = Axis::range("kappa", 0.01, 10.0, 4, Spacing::log);
  CHECK(lg.values.front() == 0.01);
  CHECK(lg.values.back() == 10.0);
  CHECK(lg.values[1] == doctest::Approx(0.1));
  CHECK(error_of([] { Axis::range("g", 0.0, 1.0, 1); }) == ErrorCode::invalid_argument);
  CHECK(error_of([] { Axis::range("g", 0.0, 1.0, 3, Spacing::log); }) == ErrorCode::invalid_argument);
  CHECK(Axis::list("n_th", {0.0, 2.0}).spacing == Spacing::list);
}

TEST_CASE("spec validation") {
  SweepSpec spec = small_spec();
  CHECK_NOTHROW(spec.validate());
  spec.axes = {};
  CHECK(error_of([&] { spec.validate(); }) == ErrorCode::invalid_argument);
  spec.axes = {Axis::range("g", 0, 1, 2), Axis::range("kappa", 1, 2, 2), Axis::range("gamma", 1, 2, 2)};
  CHECK(error_of([&] { spec.validate(); }) == ErrorCode::invalid_argument);
  spec.axes = {Axis::range("omega", 0, 1, 2)};
  CHECK(error_of([&] { spec.validate(); }) == ErrorCode::invalid_argument);
  spec.axes = {Axis::range("g", 0, 1, 2), Axis::range("g", 0, 1, 2)};
  CHECK(error_of([&] { spec.validate(); }) == ErrorCode::invalid_argument);
  spec.axes = {Axis::list("g", {1.0})};
  CHECK(error_of([&] { spec.validate(); }) == ErrorCode::invalid_argument);
}

TEST_CASE("output names round-trip") {
  for (Output o : {Output::g2_numeric, Output::g2_analytic, Output::fidelity, Output::mean_phonons,
                   Output::mean_photons, Output::residual}) {
    CHECK(parse_output(to_string(o)) == o);
  }
  CHECK_FALSE(parse_output("g3").has_value());
}

TEST_CASE("row count, ordering and determinism") {
  SweepSpec spec = small_spec();
  spec.axes = {Axis::range("delta_p", -1.0, 1.0, 3), Axis::range("g", 1.0, 2.0, 2)};
  const SweepResult a = run_sweep(spec, 1);
  const SweepResult b = run_sweep(spec, 3);
  REQUIRE(a.rows.size() == 6);
  // First axis is the outermost index.
  CHECK(a.rows[0].axis_values == std::vector<double>{-1.0, 1.0});
  CHECK(a.rows[1].axis_values == std::vector<double>{-1.0, 2.0});
  CHECK(a.rows[2].axis_values == std::vector<double>{0.0, 1.0});
  CHECK(to_csv(a) == to_csv(b));
  CHECK(to_csv(a) == to_csv(run_sweep(spec, 1)));
  CHECK(to_svg(a) == to_svg(b));
}

TEST_CASE("points are independent of the rest of the grid") {
  SweepSpec spec = small_spec();
  const SweepResult full = run_sweep(spec, 1);
  spec.axes = {Axis::list("delta_p", {-1.0, 1.0})};
  const SweepResult part = run_sweep(spec, 1);
  CHECK(part.rows[0].outputs == full.rows[0].outputs);
  CHECK(part.rows[1].outputs == full.rows[2].outputs);
}

TEST_CASE("sweep rows carry observables and analytic columns") {
  const SweepResult r = run_sweep(small_spec(), 1);
  REQUIRE(r.rows.size() == 3);
  const auto g2n = *r.output_column(Output::g2_numeric);
  const auto g2a = *r.output_column(Output::g2_analytic);
  CHECK_FALSE(r.output_column(Output::mean_photons).has_value());
  for (const auto& row : r.rows) {
    CHECK(row.error.empty());
    CHECK(std::isfinite(row.outputs[g2n]));
    SystemParams sp;
    sp.delta_p = row.axis_values[0];
    CHECK(row.outputs[g2a] == g2_analytic(sp));
  }
  CHECK(r.header() == std::vector<std::string>{"delta_p", "g2_numeric", "g2_analytic", "fidelity", "residual", "error"});
}

TEST_CASE("failed points keep their row with an error code") {
  SweepSpec spec;
  spec.base.g = 0.0;
  spec.base.gamma = 0.01;
  spec.axes = {Axis::list("epsilon", {0.0, 0.001, 0.1})};
  spec.outputs = {Output::g2_numeric, Output::mean_phonons};
  const SweepResult r = run_sweep(spec, 1);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].error == "insufficient_occupation");
  CHECK(std::isnan(r.rows[0].outputs[0]));
  CHECK(r.rows[0].outputs[1] == 0.0);
  CHECK(r.rows[1].error.empty());
  CHECK(r.rows[2].error == "truncation_explosion");
  const std::string csv = to_csv(r);
  CHECK(csv.find("nan,") != std::string::npos);
  CHECK(csv.find(",truncation_explosion\n") != std::string::npos);
}

TEST_CASE("analytic-only sweeps skip the solver") {
  SweepSpec spec;
  spec.axes = {Axis::range("delta_p", -2.0, 2.0, 5)};
  spec.outputs = {Output::g2_analytic};
  spec.solver.convergence.max_n_b = 2;  // would explode if the solver ran
  const SweepResult r = run_sweep(spec, 1);
  for (const auto& row : r.rows) CHECK(row.error.empty());
}

TEST_CASE("a result without rows writes only the header") {
  const SweepResult empty{small_spec(), {}};
  CHECK(to_csv(empty) == "delta_p,g2_numeric,g2_analytic,fidelity,residual,error\n");
}

TEST_CASE("a 3-point sweep writes 4 lines") {
  const std::string csv = to_csv(run_sweep(small_spec(), 1));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("number formatting is shortest round-trip") {
  for (double v : {0.1, 1.0 / 3.0, 3.902e-7, -2.5, 1e300}) CHECK(parse_number(format_number(v)) == v);
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(std::isnan(parse_number("nan")));
  CHECK(error_of([] { parse_number("1.0x"); }) == ErrorCode::invalid_argument);
  CHECK(error_of([] { parse_number(""); }) == ErrorCode::invalid_argument);
}

TEST_CASE("CSV files round-trip") {
  const SweepResult r = run_sweep(small_spec(), 1);
  const auto path = scratch("small.csv");
  write_csv(r, path);
  const CsvTable t = read_csv(path);
  CHECK(t.header == r.header());
  REQUIRE(t.rows.size() == 3);
  CHECK(parse_number(t.rows[1][0]) == 0.0);
  CHECK(parse_number(t.rows[2][1]) == r.rows[2].outputs[0]);
  CHECK(error_of([&] { write_csv(r, "/nonexistent/dir/x.csv"); }) == ErrorCode::io_failure);
  CHECK(error_of([&] { read_csv(scratch("missing.csv")); }) == ErrorCode::io_failure);
}

TEST_CASE("SVG output for each figure shape") {
  SweepResult line = run_sweep(small_spec(), 1);
  const std::string s = to_svg(line);
  CHECK(s.rfind("<svg", 0) == 0);
  CHECK(s.find("</svg>") != std::string::npos);
  CHECK(s.find("polyline") != std::string::npos);

  SweepSpec heat;
  heat.name = "heat";
  heat.axes = {Axis::range("delta_p", -2.0, 2.0, 3), Axis::range("g", 1.0, 2.0, 2)};
  heat.outputs = {Output::g2_analytic};
  const std::string h = to_svg(run_sweep(heat, 1));
  CHECK(h.find("<rect") != std::string::npos);

  SweepSpec family;
  family.axes = {Axis::list("n_th", {0.0, 0.1}), Axis::range("delta_p", -1.0, 1.0, 3)};
  family.outputs = {Output::g2_analytic};
  CHECK(to_svg(run_sweep(family, 1)).find("polyline") != std::string::npos);

  render_svg(line, scratch("line.svg"));
  CHECK(std::filesystem::file_size(scratch("line.svg")) == s.size());
}

TEST_CASE("figure recipes lock their parameters") {
  const SweepSpec f2 = figure_recipe(Figure::fig2);
  CHECK(f2.base.gamma == 0.01);
  CHECK(f2.base.epsilon == 0.1);
  CHECK(f2.axes[0].name == "delta_p");
  CHECK(f2.axes[1].name == "g");
  CHECK(f2.point_count() == 61 * 61);

  const SweepSpec f3 = figure_recipe(Figure::fig3);
  CHECK(f3.base.g == 2.0);
  CHECK(f3.base.delta_p == 0.0);
  CHECK(f3.axes[0].name == "epsilon");
  CHECK(f3.axes[0].values.size() == 101);

  const SweepSpec f4 = figure_recipe(Figure::fig4);
  CHECK(f4.axes[0].values.front() == -4.0);
  CHECK(f4.axes[0].values.back() == 4.0);
  CHECK(f4.axes[0].values.size() == 101);
  CHECK(f4.outputs[0] == Output::g2_numeric);
  CHECK(f4.outputs[1] == Output::g2_analytic);

  const SweepSpec f5 = figure_recipe(Figure::fig5);
  CHECK(f5.axes[0].name == "kappa");
  CHECK(f5.axes[1].name == "gamma");
  CHECK(f5.axes[0].spacing == Spacing::log);

  const SweepSpec f6 = figure_recipe(Figure::fig6, {0.0, 3.0});
  CHECK(f6.axes[0].values == std::vector<double>{0.0, 3.0});
  CHECK(figure_recipe(Figure::fig6).axes[0].values == default_fig6_thermal_occupations());
}

TEST_CASE("fig3 recipe keeps high fidelity at weak pumping") {
  SweepSpec f3 = figure_recipe(Figure::fig3);
  f3.axes = {Axis::list("epsilon", {0.1, 0.3})};
  const SweepResult r = run_sweep(f3, 1);
  const auto col = *r.output_column(Output::fidelity);
  CHECK(r.rows[0].outputs[col] > 0.99);
  CHECK(r.rows[0].outputs[col] >= r.rows[1].outputs[col]);
}

TEST_CASE("fig5 analytic column is constant along kappa gamma = const") {
  SweepSpec f5 = figure_recipe(Figure::fig5);
  f5.outputs = {Output::g2_analytic};
  f5.axes = {Axis::list("kappa", {0.1, 1.0}), Axis::list("gamma", {0.1, 0.01})};
  const SweepResult r = run_sweep(f5, 1);
  CHECK(phonon::test::rel_diff(r.rows[0].outputs[0], r.rows[3].outputs[0]) < 1e-12);
}
