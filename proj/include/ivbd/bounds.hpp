#pragma once

#include <span>

#include "ivbd/types.hpp"

namespace ivbd {

/// Which relaxation the identified-set formulas assume. `separate` bounds the
/// dependence of assignment on each potential quantity on its own; `joint`
/// bounds the dependence on the (potential outcome, potential treatment) pair
/// and widens the middle branches from c to 2c.
enum class BoundVariant { separate, joint };

/// Identified set for a potential quantity P(Q(z)=1 | x) given the observed
/// conditional probability `p` = P(Q=1 | Z=z, x) and the assignment-arm
/// probability `q` = P(Z=z | x), under relaxation `c`.
///
/// The c >= q regime replaces the p*q/(q-c) upper branch by 1 and drops the
/// (p*q - c)/(q - c) lower branch, keeping the formulas total.
Interval potential_quantity_bound(double p, double q, double c, BoundVariant variant);

/// Cell-level identified set for the share of compliers, clipped to [0, 1].
Interval first_stage_bounds_conditional(const Cell& cell, double c1, BoundVariant variant);

/// Cell-level identified set for the ITT. The lower bound is not clipped at
/// zero; the interval is clipped to [-1, 1].
Interval reduced_form_bounds_conditional(const Cell& cell, double c2, BoundVariant variant);

/// Weighted average of conditional intervals. Weights must sum to one. With
/// `clip_lb_at_zero` the aggregated lower bound is floored at zero, matching
/// the unconditional first-stage display where max(0, .) wraps the integrals.
Interval aggregate_bounds(std::span<const Interval> intervals,
                          std::span<const double> weights, bool clip_lb_at_zero);

/// Unconditional (covariate-aggregated) first-stage identified set.
Interval first_stage_bounds(const CellTable& table, double c1, BoundVariant variant);

/// Unconditional reduced-form identified set.
Interval reduced_form_bounds(const CellTable& table, double c2, BoundVariant variant);

struct LateBounds {
  Interval interval;
  /// Set when the lower bound of the first stage (the upper-bound denominator)
  /// degenerates to zero and the upper bound falls back to the trivial clip.
  bool weak_upper = false;
};

/// LATE set assembled from already-computed ITT and first-stage intervals.
LateBounds late_bounds_from_components(const Interval& tau_y, const Interval& tau_d,
                                       RatioMode mode = RatioMode::paired);

/// Unconditional LATE identified set under separate (c1, c2) relaxations.
///
/// `RatioMode::paired` uses lb = max(tauY_lb / tauD_ub, -1) and
/// ub = min(tauY_ub / tauD_lb, 1). `RatioMode::rectangle` takes the envelope
/// of the four corner ratios, which remains valid when tauY_lb < 0.
LateBounds late_bounds(const CellTable& table, double c1, double c2,
                       RatioMode mode = RatioMode::paired);

/// Cell-level LATE identified set under separate relaxations.
LateBounds late_bounds_conditional(const Cell& cell, double c1, double c2,
                                   RatioMode mode = RatioMode::paired);

/// Unconditional LATE identified set under the joint relaxation. Numerator
/// and denominator pieces are aggregated over q_x before the ratios are
/// taken; potential quantities use the joint variant.
LateBounds late_bounds_joint(const CellTable& table, double c);

/// Cell-level LATE identified set under the joint relaxation.
LateBounds late_bounds_joint_conditional(const Cell& cell, double c);

}  // namespace ivbd
