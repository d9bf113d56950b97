#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "ivbd/breakdown.hpp"
#include "ivbd/oracle.hpp"
#include "test_support.hpp"

using namespace ivbd;

namespace {

// p_{D|0} = 0.2, p_{D|1} = 0.5, p_{Y|0} = 0.5, p_{Y|1} = 0.6, balanced arms.
CellTable reference_table() {
  return test::single_cell_table(0.5, 0.2, 0.5, 0.5, 0.6);
}

}  // namespace

TEST_CASE("bisection locates the root of a linear curve") {
  const BreakdownResult r =
      solve_breakdown([](double c) { return 0.5 - c; }, 0.3);
  CHECK(r.value == doctest::Approx(0.2).epsilon(1e-9));
  CHECK_FALSE(r.clipped);
  CHECK(std::abs(r.residual) < 1e-9);
  CHECK(r.solver_iterations > 20);
  CHECK_FALSE(r.ci_lower.has_value());
}

TEST_CASE("a conclusion that fails at independence clips to zero") {
  const BreakdownResult r =
      solve_breakdown([](double c) { return 0.5 - c; }, 0.5);
  CHECK(r.value == 0.0);
  CHECK(r.clipped);
}

TEST_CASE("a conclusion that survives the worst case clips to c_max") {
  const BreakdownResult r =
      solve_breakdown([](double c) { return 0.9 - 0.1 * c; }, 0.3, 0.5);
  CHECK(r.value == 0.5);
  CHECK(r.clipped);
  CHECK(r.residual == doctest::Approx(0.55).epsilon(1e-12));
}

TEST_CASE("an increasing curve above the threshold is rejected") {
  const auto curve = [](double c) { return c < 0.3 ? 0.8 - c : 0.9; };
  CHECK_THROWS_AS(solve_breakdown(curve, 0.2), NonMonotoneCurve);
}

TEST_CASE("wiggles below the threshold are tolerated") {
  // Crosses mu = 0.6 at c = 0.1; afterwards stays below mu while increasing.
  const auto curve = [](double c) {
    return c <= 0.2 ? 1.0 - 4.0 * c : 0.1 + 0.5 * (c - 0.2);
  };
  const BreakdownResult r = solve_breakdown(curve, 0.6);
  CHECK(r.value == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("c_max is validated") {
  const auto curve = [](double c) { return 1.0 - c; };
  CHECK_THROWS_AS(solve_breakdown(curve, 0.5, 0.0), InvalidParams);
  CHECK_THROWS_AS(solve_breakdown(curve, 0.5, 1.5), InvalidParams);
}

TEST_CASE("first-stage breakdown point of the reference table") {
  // lb(c) = 0.25/(0.5+c) - 0.1/(0.5-c) on the binding branches; the root of
  // 0.25(0.5-c) = 0.1(0.5+c) is c = 3/14.
  const BreakdownResult r =
      breakdown_point_first_stage(reference_table(), 0.0, BoundVariant::separate);
  CHECK(r.value == doctest::Approx(3.0 / 14.0).epsilon(1e-6));
  CHECK_FALSE(r.clipped);
}

TEST_CASE("reduced-form breakdown in the at-most direction tracks the upper curve") {
  const CellTable table = reference_table();
  const BreakdownResult r = breakdown_point_reduced_form(
      table, 0.15, BoundVariant::separate, Direction::at_most);
  CHECK_FALSE(r.clipped);
  const double ub_at_root =
      reduced_form_bounds(table, r.value, BoundVariant::separate).ub();
  CHECK(ub_at_root == doctest::Approx(0.15).epsilon(1e-6));
}

TEST_CASE("root finder and grid scan agree across targets and tables") {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int t = 0; t < 20; ++t) {
    const CellTable table = test::random_table(rng);
    for (const double mu : {0.0, 0.05}) {
      for (const Target target :
           {Target::first_stage, Target::reduced_form, Target::late}) {
        const BoundVariant variant =
            target == Target::late ? BoundVariant::joint : BoundVariant::separate;
        double solved;
        try {
          switch (target) {
            case Target::first_stage:
              solved = breakdown_point_first_stage(table, mu, variant).value;
              break;
            case Target::reduced_form:
              solved = breakdown_point_reduced_form(table, mu, variant).value;
              break;
            default:
              solved = breakdown_point_joint(table, mu).value;
              break;
          }
        } catch (const DegenerateFirstStage&) {
          continue;  // first stage collapses at independence for this table
        }
        const double scanned =
            breakdown_grid_scan(table, mu, target, 1e-3, variant);
        // The scan returns the smallest grid point in the sublevel set, so it
        // sits within one step above the infimum.
        CHECK(scanned >= solved - 1e-9);
        CHECK(scanned <= solved + 1e-3 + 1e-9);
        ++checked;
      }
    }
  }
  CHECK(checked > 60);
}

TEST_CASE("the frontier at mu = 0 does not depend on c1") {
  const CellTable table = reference_table();
  const FrontierCurve curve =
      breakdown_frontier(table, 0.0, uniform_grid(0.5, 11));
  REQUIRE(curve.values.size() == 11);
  for (std::size_t i = 0; i < curve.values.size(); ++i) {
    CHECK_FALSE(curve.degenerate[i]);
    CHECK(curve.values[i] == doctest::Approx(curve.values[0]).epsilon(1e-12));
  }
}

TEST_CASE("the frontier is nonincreasing in c1 for a positive threshold") {
  const CellTable table = reference_table();
  const FrontierCurve curve =
      breakdown_frontier(table, 0.25, uniform_grid(0.5, 26));
  for (std::size_t i = 1; i < curve.values.size(); ++i) {
    CHECK(curve.values[i] <= curve.values[i - 1] + 1e-9);
  }
  // A larger c1 inflates the denominator, so the numerator breaks sooner.
  CHECK(curve.values.back() < curve.values.front());
}

TEST_CASE("frontier values agree with the 2-d grid scan") {
  const CellTable table = reference_table();
  const std::vector<double> grid = {0.0, 0.1, 0.2};
  const FrontierCurve curve = breakdown_frontier(table, 0.1, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double scanned = frontier_grid_scan(table, grid[i], 0.1, 1e-3);
    CHECK(scanned >= curve.values[i] - 1e-9);
    CHECK(scanned <= curve.values[i] + 1e-3 + 1e-9);
  }
}

TEST_CASE("a degenerate first stage is flagged on the frontier") {
  // p_{D|1} < p_{D|0} makes the first-stage interval collapse to {0} at c1 = 0.
  const CellTable table = test::single_cell_table(0.5, 0.5, 0.2, 0.5, 0.6);
  const FrontierCurve curve =
      breakdown_frontier(table, 0.0, uniform_grid(0.4, 5));
  CHECK(curve.degenerate[0]);
  CHECK(curve.values[0] == 0.0);
  CHECK_FALSE(curve.degenerate.back());
}

TEST_CASE("frontier grids must be strictly increasing and nonempty") {
  const CellTable table = reference_table();
  const std::vector<double> bad = {0.0, 0.1, 0.1};
  CHECK_THROWS_AS(breakdown_frontier(table, 0.0, bad), InvalidParams);
  CHECK_THROWS_AS(breakdown_frontier(table, 0.0, std::vector<double>{}),
                  InvalidParams);
}

TEST_CASE("uniform grids span [0, c_max]") {
  const std::vector<double> grid = uniform_grid(0.5, 11);
  REQUIRE(grid.size() == 11);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(grid[1] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK_THROWS_AS(uniform_grid(0.5, 1), InvalidParams);
  CHECK_THROWS_AS(uniform_grid(0.0, 11), InvalidParams);
}
