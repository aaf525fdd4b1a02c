#include "mrec/search.hpp"

#include "mrec/datagen.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace mrec;

namespace {

struct SmallProblem {
  MetricSpace X;
  MetricSpace Y;
  std::vector<std::string> labels_x;
  std::vector<std::string> labels_y;
};

SmallProblem small_problem() {
  const auto [pts, labels] = gen_separated_clusters(2, 8.0, 1.0, 16, 2, 5);
  auto [a, b] = split_halves(pts, labels, 9);
  return {a.space, b.space, *a.labels, *b.labels};
}

MrecParams base_params() {
  MrecParams p;
  p.C = 2;
  p.T = 6;
  return p;
}

}  // namespace

TEST_CASE("single cell grid returns that cell") {
  const SmallProblem prob = small_problem();
  SweepGrid grid;
  grid.epsilon_values = {0.05};
  grid.C_values = {2};
  grid.matchers = {MatcherConfig{}};
  grid.runs_per_cell = 1;
  const SweepResult res =
      sweep(prob.X, prob.Y, base_params(), grid, prob.labels_x, prob.labels_y);
  REQUIRE(res.table.size() == 1);
  CHECK(res.best_index == 0);
  CHECK_FALSE(res.table[0].failed);
  CHECK(res.best_report.distortion == res.table[0].distortion);
  CHECK(res.best_matching.forward.size() == prob.labels_x.size());
}

TEST_CASE("degenerate epsilon cells fail without aborting the sweep") {
  const SmallProblem prob = small_problem();
  SweepGrid grid;
  grid.epsilon_values = {0.05, 0.0};  // zero epsilon is invalid per cell
  grid.C_values = {2};
  grid.matchers = {MatcherConfig{}};
  grid.runs_per_cell = 2;
  const SweepResult res =
      sweep(prob.X, prob.Y, base_params(), grid, prob.labels_x, prob.labels_y);
  REQUIRE(res.table.size() == 4);
  int failed = 0;
  for (const SweepCell& cell : res.table)
    if (cell.failed) {
      ++failed;
      CHECK(cell.epsilon == 0.0);
      CHECK_FALSE(cell.error.empty());
    }
  CHECK(failed == 2);
  CHECK(res.best_index >= 0);
  CHECK(res.table[res.best_index].epsilon == 0.05);
}

TEST_CASE("best cell minimizes distortion and the sweep is reproducible") {
  const SmallProblem prob = small_problem();
  SweepGrid grid;
  grid.epsilon_values = {0.5, 0.05};
  grid.C_values = {2, 4};
  grid.matchers = {MatcherConfig{}};
  grid.runs_per_cell = 3;
  grid.base_seed = 17;

  const SweepResult serial =
      sweep(prob.X, prob.Y, base_params(), grid, prob.labels_x, prob.labels_y, 1);
  const SweepResult parallel =
      sweep(prob.X, prob.Y, base_params(), grid, prob.labels_x, prob.labels_y, 3);

  REQUIRE(serial.table.size() == parallel.table.size());
  for (size_t i = 0; i < serial.table.size(); ++i) {
    CHECK(serial.table[i].seed == parallel.table[i].seed);
    CHECK(serial.table[i].distortion == parallel.table[i].distortion);
    CHECK(serial.table[i].failed == parallel.table[i].failed);
  }
  CHECK(serial.best_index == parallel.best_index);
  CHECK(serial.best_matching.forward == parallel.best_matching.forward);

  for (const SweepCell& cell : serial.table)
    if (!cell.failed)
      CHECK(serial.table[serial.best_index].distortion <= cell.distortion);
}

TEST_CASE("labels are optional") {
  const SmallProblem prob = small_problem();
  SweepGrid grid;
  grid.epsilon_values = {0.05};
  grid.C_values = {2};
  grid.matchers = {MatcherConfig{}};
  grid.runs_per_cell = 1;
  const SweepResult res =
      sweep(prob.X, prob.Y, base_params(), grid, std::nullopt, std::nullopt);
  CHECK_FALSE(res.table[0].accuracy.has_value());
  CHECK_FALSE(res.best_report.accuracy.has_value());
}

TEST_CASE("curve export aggregates per C") {
  std::vector<SweepCell> table;
  const auto mk = [](int C, double eps, int run, double dist, double acc,
                     double rt) {
    SweepCell c;
    c.C = C;
    c.epsilon = eps;
    c.run = run;
    c.distortion = dist;
    c.accuracy = acc;
    c.runtime_seconds = rt;
    return c;
  };

  SUBCASE("identical runs have zero variance") {
    for (int r = 0; r < 3; ++r) table.push_back(mk(10, 0.1, r, 2.0, 0.9, 1.0));
    const auto rows = curve_export(table);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].C == 10);
    CHECK(rows[0].mean_distortion == doctest::Approx(2.0));
    CHECK(rows[0].var_distortion == doctest::Approx(0.0));
    CHECK(rows[0].mean_accuracy == doctest::Approx(0.9));
  }

  SUBCASE("hand computed three run fixture") {
    table.push_back(mk(10, 0.1, 0, 1.0, 0.5, 1.0));
    table.push_back(mk(10, 0.1, 1, 2.0, 0.7, 2.0));
    table.push_back(mk(10, 0.1, 2, 4.0, 0.6, 3.0));
    const auto rows = curve_export(table);
    REQUIRE(rows.size() == 1);
    // mean 7/3; population variance ((1-7/3)^2+(2-7/3)^2+(4-7/3)^2)/3 = 14/9
    CHECK(rows[0].mean_distortion == doctest::Approx(7.0 / 3.0));
    CHECK(rows[0].var_distortion == doctest::Approx(14.0 / 9.0));
    CHECK(rows[0].mean_accuracy == doctest::Approx(0.6));
    CHECK(rows[0].var_accuracy ==
          doctest::Approx((0.01 + 0.01 + 0.0) / 3.0).epsilon(1e-9));
    CHECK(rows[0].mean_runtime_seconds == doctest::Approx(2.0));
  }

  SUBCASE("rows sorted ascending by C and per-C best epsilon group") {
    // at C=10 the 0.1-epsilon group has lower mean distortion
    table.push_back(mk(10, 0.1, 0, 1.0, 0.9, 1.0));
    table.push_back(mk(10, 0.5, 0, 3.0, 0.2, 1.0));
    table.push_back(mk(100, 0.1, 0, 0.5, 0.95, 2.0));
    const auto rows = curve_export(table);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].C == 10);
    CHECK(rows[1].C == 100);
    CHECK(rows[0].mean_distortion == doctest::Approx(1.0));
    CHECK(rows[0].mean_accuracy == doctest::Approx(0.9));
  }

  SUBCASE("failed cells are excluded from aggregation") {
    table.push_back(mk(10, 0.1, 0, 1.0, 0.9, 1.0));
    SweepCell failed = mk(10, 0.1, 1, std::nan(""), 0.0, 0.0);
    failed.failed = true;
    table.push_back(failed);
    const auto rows = curve_export(table);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mean_distortion == doctest::Approx(1.0));
  }
}

TEST_CASE("grid validation") {
  const SmallProblem prob = small_problem();
  SweepGrid empty;
  empty.matchers.clear();
  empty.epsilon_values = {0.1};
  empty.C_values = {2};
  CHECK_THROWS(sweep(prob.X, prob.Y, base_params(), empty, std::nullopt, std::nullopt));
}
