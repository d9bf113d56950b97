#include "ivbd/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace ivbd {

namespace {

constexpr double kDenomTol = 1e-12;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

struct PiecesY {
  double lb1 = 0, ub1 = 0, lb0 = 0, ub0 = 0;
};

PiecesY accumulate_pieces(const CellTable& table, double c, BoundVariant variant,
                          bool outcome) {
  PiecesY acc;
  for (const Cell& cell : table.cells()) {
    const auto& p = outcome ? cell.p_y : cell.p_d;
    const Interval b1 = potential_quantity_bound(p[1], cell.p_arm(1), c, variant);
    const Interval b0 = potential_quantity_bound(p[0], cell.p_arm(0), c, variant);
    acc.lb1 += cell.q * b1.lb();
    acc.ub1 += cell.q * b1.ub();
    acc.lb0 += cell.q * b0.lb();
    acc.ub0 += cell.q * b0.ub();
  }
  return acc;
}

/// Ratio envelope over the rectangle [ylb, yub] x [dlb, dub], dub > 0.
/// Denominator values at or below zero contribute the trivial clips.
Interval corner_envelope(double ylb, double yub, double dlb, double dub,
                         bool* weak) {
  double lo = 1.0, hi = -1.0;
  bool any = false;
  for (double num : {ylb, yub}) {
    for (double den : {dlb, dub}) {
      if (den <= kDenomTol) continue;
      const double r = std::clamp(num / den, -1.0, 1.0);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      any = true;
    }
  }
  if (dlb <= kDenomTol) {
    if (weak) *weak = true;
    if (yub > kDenomTol) hi = 1.0;
    if (ylb < -kDenomTol) lo = -1.0;
    if (!any && yub >= -kDenomTol && ylb <= kDenomTol) {
      lo = std::min(lo, 0.0);
      hi = std::max(hi, 0.0);
    }
  }
  return Interval(lo, hi);
}

LateBounds late_from_intervals(const Interval& tau_y, const Interval& tau_d,
                               RatioMode mode) {
  if (tau_d.ub() <= kDenomTol) {
    throw DegenerateFirstStage("upper bound of the first stage is zero");
  }
  LateBounds out{Interval(0, 0), false};
  if (mode == RatioMode::rectangle) {
    out.interval = corner_envelope(tau_y.lb(), tau_y.ub(), tau_d.lb(), tau_d.ub(),
                                   &out.weak_upper);
    return out;
  }
  const double lb = std::clamp(tau_y.lb() / tau_d.ub(), -1.0, 1.0);
  double ub;
  if (tau_d.lb() <= kDenomTol) {
    ub = 1.0;
    out.weak_upper = true;
  } else {
    ub = std::clamp(tau_y.ub() / tau_d.lb(), -1.0, 1.0);
  }
  if (lb > ub) {
    // The displayed pairing is an envelope only when the ITT numerator is
    // nonnegative; otherwise the ratios can cross and the corner envelope
    // is the valid set.
    out.interval = corner_envelope(tau_y.lb(), tau_y.ub(), tau_d.lb(), tau_d.ub(),
                                   &out.weak_upper);
  } else {
    out.interval = Interval(lb, ub);
  }
  return out;
}

}  // namespace

LateBounds late_bounds_from_components(const Interval& tau_y, const Interval& tau_d,
                                       RatioMode mode) {
  return late_from_intervals(tau_y, tau_d, mode);
}

Interval potential_quantity_bound(double p, double q, double c, BoundVariant variant) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidProbability("p must lie in [0,1]");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidProbability("q must lie in [0,1]");
  if (!(c >= 0.0 && c <= 1.0)) throw InvalidProbability("c must lie in [0,1]");
  if (q <= kDenomTol) {
    throw ZeroAssignmentProbability("assignment-arm probability is zero");
  }

  const double pq = p * q;
  const double m = variant == BoundVariant::joint ? 2.0 * c : c;

  double lb = std::max(pq / (q + c), pq);
  double ub = std::min((pq + m) / (q + c), pq + (1.0 - q));
  if (q > c) {
    lb = std::max(lb, (pq - m) / (q - c));
    ub = std::min(ub, pq / (q - c));
  }
  return Interval(clamp01(lb), clamp01(ub));
}

Interval first_stage_bounds_conditional(const Cell& cell, double c1,
                                        BoundVariant variant) {
  const Interval b1 = potential_quantity_bound(cell.p_d[1], cell.p_arm(1), c1, variant);
  const Interval b0 = potential_quantity_bound(cell.p_d[0], cell.p_arm(0), c1, variant);
  return Interval(clamp01(b1.lb() - b0.ub()), clamp01(b1.ub() - b0.lb()));
}

Interval reduced_form_bounds_conditional(const Cell& cell, double c2,
                                         BoundVariant variant) {
  const Interval b1 = potential_quantity_bound(cell.p_y[1], cell.p_arm(1), c2, variant);
  const Interval b0 = potential_quantity_bound(cell.p_y[0], cell.p_arm(0), c2, variant);
  return Interval(std::clamp(b1.lb() - b0.ub(), -1.0, 1.0),
                  std::clamp(b1.ub() - b0.lb(), -1.0, 1.0));
}

Interval aggregate_bounds(std::span<const Interval> intervals,
                          std::span<const double> weights, bool clip_lb_at_zero) {
  if (intervals.size() != weights.size() || intervals.empty()) {
    throw WeightMismatch("one weight per interval is required");
  }
  double wsum = 0.0, lb = 0.0, ub = 0.0;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    wsum += weights[i];
    lb += weights[i] * intervals[i].lb();
    ub += weights[i] * intervals[i].ub();
  }
  if (std::abs(wsum - 1.0) > 1e-9) {
    throw WeightMismatch("weights sum to " + std::to_string(wsum) + ", expected 1");
  }
  if (clip_lb_at_zero) {
    lb = std::max(lb, 0.0);
    ub = std::max(ub, lb);
  }
  return Interval(lb, ub);
}

Interval first_stage_bounds(const CellTable& table, double c1, BoundVariant variant) {
  const PiecesY p = accumulate_pieces(table, c1, variant, /*outcome=*/false);
  const double lb = std::max(0.0, p.lb1 - p.ub0);
  const double ub = std::max(lb, std::min(1.0, p.ub1 - p.lb0));
  return Interval(lb, ub);
}

Interval reduced_form_bounds(const CellTable& table, double c2, BoundVariant variant) {
  const PiecesY p = accumulate_pieces(table, c2, variant, /*outcome=*/true);
  return Interval(std::clamp(p.lb1 - p.ub0, -1.0, 1.0),
                  std::clamp(p.ub1 - p.lb0, -1.0, 1.0));
}

LateBounds late_bounds(const CellTable& table, double c1, double c2, RatioMode mode) {
  const Interval tau_d = first_stage_bounds(table, c1, BoundVariant::separate);
  const Interval tau_y = reduced_form_bounds(table, c2, BoundVariant::separate);
  return late_from_intervals(tau_y, tau_d, mode);
}

LateBounds late_bounds_conditional(const Cell& cell, double c1, double c2,
                                   RatioMode mode) {
  const Interval tau_d = first_stage_bounds_conditional(cell, c1, BoundVariant::separate);
  const Interval tau_y = reduced_form_bounds_conditional(cell, c2, BoundVariant::separate);
  return late_from_intervals(tau_y, tau_d, mode);
}

namespace {

LateBounds late_joint_from_pieces(const PiecesY& y, const PiecesY& d) {
  const double den_lb = d.ub1 - d.lb0;
  if (den_lb <= kDenomTol) {
    throw DegenerateFirstStage("joint first-stage denominator is zero");
  }
  LateBounds out{Interval(0, 0), false};
  const double lb = std::clamp((y.lb1 - y.ub0) / den_lb, -1.0, 1.0);
  const double den_ub = d.lb1 - d.ub0;
  double ub;
  if (den_ub <= kDenomTol) {
    ub = 1.0;
    out.weak_upper = true;
  } else {
    ub = std::clamp((y.ub1 - y.lb0) / den_ub, -1.0, 1.0);
  }
  if (lb > ub) {
    out.interval = corner_envelope(y.lb1 - y.ub0, y.ub1 - y.lb0, den_ub, den_lb,
                                   &out.weak_upper);
  } else {
    out.interval = Interval(lb, ub);
  }
  return out;
}

}  // namespace

LateBounds late_bounds_joint(const CellTable& table, double c) {
  const PiecesY y = accumulate_pieces(table, c, BoundVariant::joint, /*outcome=*/true);
  const PiecesY d = accumulate_pieces(table, c, BoundVariant::joint, /*outcome=*/false);
  return late_joint_from_pieces(y, d);
}

LateBounds late_bounds_joint_conditional(const Cell& cell, double c) {
  PiecesY y, d;
  for (const bool outcome : {true, false}) {
    const auto& p = outcome ? cell.p_y : cell.p_d;
    const Interval b1 = potential_quantity_bound(p[1], cell.p_arm(1), c, BoundVariant::joint);
    const Interval b0 = potential_quantity_bound(p[0], cell.p_arm(0), c, BoundVariant::joint);
    PiecesY& acc = outcome ? y : d;
    acc = PiecesY{b1.lb(), b1.ub(), b0.lb(), b0.ub()};
  }
  return late_joint_from_pieces(y, d);
}

}  // namespace ivbd
