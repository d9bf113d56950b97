#include "ivbd/breakdown.hpp"

#include <algorithm>
#include <cmath>

namespace ivbd {

namespace {

constexpr double kBisectTol = 1e-10;
constexpr double kMonotoneTol = 1e-9;
constexpr int kMonotoneSamples = 21;

double late_joint_lb(const CellTable& table, double c) {
  return late_bounds_joint(table, c).interval.lb();
}

double late_joint_ub(const CellTable& table, double c) {
  return late_bounds_joint(table, c).interval.ub();
}

}  // namespace

BreakdownResult solve_breakdown(const std::function<double(double)>& lb_curve,
                                double mu, double c_max) {
  if (!(c_max > 0.0 && c_max <= 1.0)) {
    throw InvalidParams("c_max must lie in (0, 1]");
  }
  BreakdownResult result;

  const double at_zero = lb_curve(0.0);
  result.solver_iterations = 1;
  if (at_zero <= mu) {
    result.value = 0.0;
    result.clipped = true;
    result.residual = at_zero - mu;
    return result;
  }

  // Sampled monotonicity check. Points already at or below mu are exempt:
  // the solver only relies on the curve being nonincreasing down to the
  // crossing level.
  double prev = at_zero;
  for (int i = 1; i < kMonotoneSamples; ++i) {
    const double c = c_max * static_cast<double>(i) / (kMonotoneSamples - 1);
    const double v = lb_curve(c);
    ++result.solver_iterations;
    if (v > prev + kMonotoneTol && v > mu) {
      throw NonMonotoneCurve("lower-bound curve increases at c = " + std::to_string(c));
    }
    prev = std::min(prev, v);
  }

  const double at_max = lb_curve(c_max);
  ++result.solver_iterations;
  if (at_max > mu) {
    result.value = c_max;
    result.clipped = true;
    result.residual = at_max - mu;
    return result;
  }

  double lo = 0.0;   // lb_curve(lo) > mu
  double hi = c_max; // lb_curve(hi) <= mu
  while (hi - lo > kBisectTol) {
    const double mid = 0.5 * (lo + hi);
    const double v = lb_curve(mid);
    ++result.solver_iterations;
    if (v <= mu) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  result.value = hi;
  result.clipped = false;
  result.residual = lb_curve(hi) - mu;
  return result;
}

BreakdownResult breakdown_point_first_stage(const CellTable& table, double mu,
                                            BoundVariant variant, double c_max) {
  return solve_breakdown(
      [&](double c) { return first_stage_bounds(table, c, variant).lb(); }, mu,
      c_max);
}

BreakdownResult breakdown_point_reduced_form(const CellTable& table, double mu,
                                             BoundVariant variant,
                                             Direction direction, double c_max) {
  if (direction == Direction::at_least) {
    return solve_breakdown(
        [&](double c) { return reduced_form_bounds(table, c, variant).lb(); }, mu,
        c_max);
  }
  // tau_Y <= mu holds while -tau_Y^UB(c) >= -mu.
  return solve_breakdown(
      [&](double c) { return -reduced_form_bounds(table, c, variant).ub(); }, -mu,
      c_max);
}

BreakdownResult breakdown_point_joint(const CellTable& table, double mu,
                                      Direction direction, double c_max) {
  if (direction == Direction::at_least) {
    return solve_breakdown([&](double c) { return late_joint_lb(table, c); }, mu,
                           c_max);
  }
  return solve_breakdown([&](double c) { return -late_joint_ub(table, c); }, -mu,
                         c_max);
}

FrontierCurve breakdown_frontier(const CellTable& table, double mu,
                                 std::span<const double> c1_grid,
                                 BoundVariant variant, double c_max) {
  if (c1_grid.empty()) throw InvalidParams("frontier grid must be nonempty");
  for (std::size_t i = 1; i < c1_grid.size(); ++i) {
    if (!(c1_grid[i] > c1_grid[i - 1])) {
      throw InvalidParams("frontier grid must be strictly increasing");
    }
  }
  FrontierCurve curve;
  curve.mu = mu;
  curve.grid.assign(c1_grid.begin(), c1_grid.end());
  curve.values.reserve(c1_grid.size());
  curve.degenerate.reserve(c1_grid.size());

  for (const double c1 : c1_grid) {
    const Interval tau_d = first_stage_bounds(table, c1, variant);
    if (tau_d.ub() <= 1e-12) {
      curve.values.push_back(0.0);
      curve.degenerate.push_back(true);
      continue;
    }
    const double denom = tau_d.ub();
    const auto late_lb = [&](double c2) {
      const double num = reduced_form_bounds(table, c2, variant).lb();
      return std::max(num / denom, -1.0);
    };
    curve.values.push_back(solve_breakdown(late_lb, mu, c_max).value);
    curve.degenerate.push_back(false);
  }
  return curve;
}

std::vector<double> uniform_grid(double c_max, int points) {
  if (points < 2 || !(c_max > 0.0)) {
    throw InvalidParams("grid needs c_max > 0 and at least two points");
  }
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = c_max * static_cast<double>(i) / (points - 1);
  }
  return grid;
}

}  // namespace ivbd
