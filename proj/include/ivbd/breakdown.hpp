#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ivbd/bounds.hpp"
#include "ivbd/types.hpp"

namespace ivbd {

/// Breakdown frontier BF(c1, mu) evaluated on a c1 grid.
struct FrontierCurve {
  std::vector<double> grid;        // strictly increasing c1 values
  std::vector<double> values;      // BF(c1, mu), each in [0, 1]
  std::vector<bool> degenerate;    // grid points where the first stage degenerated
  double mu = 0.0;
};

/// Infimum of {c in [0, c_max] : lb_curve(c) <= mu} for a monotone
/// nonincreasing curve, located by bisection. Returns 0 (clipped) when the
/// conclusion already fails at independence and c_max (clipped) when it
/// survives the worst case on the search interval.
///
/// Monotonicity is asserted by a sampled check (tolerance 1e-9); samples that
/// already sit at or below mu are exempt, since only the crossing matters.
BreakdownResult solve_breakdown(const std::function<double(double)>& lb_curve,
                                double mu, double c_max = 1.0);

/// Breakdown point c1* for the conclusion that the complier share is >= mu.
BreakdownResult breakdown_point_first_stage(const CellTable& table, double mu,
                                            BoundVariant variant,
                                            double c_max = 1.0);

/// Breakdown point c2* for the conclusion that the ITT is >= mu (direction
/// at_least) or <= mu (at_most, solved on the negated upper-bound curve).
BreakdownResult breakdown_point_reduced_form(const CellTable& table, double mu,
                                             BoundVariant variant,
                                             Direction direction = Direction::at_least,
                                             double c_max = 1.0);

/// Breakdown point c* for a LATE conclusion under the joint relaxation.
BreakdownResult breakdown_point_joint(const CellTable& table, double mu,
                                      Direction direction = Direction::at_least,
                                      double c_max = 1.0);

/// Breakdown frontier: per grid point c1, the root in c2 of
/// tauY_lb(c2) / tauD_ub(c1) = mu, clipped to [0, 1]. Grid points where the
/// first stage degenerates are recorded as 0 with a flag.
FrontierCurve breakdown_frontier(const CellTable& table, double mu,
                                 std::span<const double> c1_grid,
                                 BoundVariant variant = BoundVariant::separate,
                                 double c_max = 1.0);

/// Equally spaced grid {0, ..., c_max} with `points` entries.
std::vector<double> uniform_grid(double c_max, int points = 101);

}  // namespace ivbd
