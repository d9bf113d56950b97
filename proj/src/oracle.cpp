#include "ivbd/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "ivbd/breakdown.hpp"

namespace ivbd {

namespace {

constexpr double kEps = 1e-9;

}  // namespace

Interval sharp_bound_grid(double p, double q, double c, double step) {
  if (!(step > 0.0 && step <= 0.01)) {
    throw InvalidParams("oracle step must lie in (0, 0.01]");
  }
  if (!(p >= 0.0 && p <= 1.0 && q > 0.0 && q <= 1.0 && c >= 0.0 && c <= 1.0)) {
    throw InvalidProbability("oracle inputs must be probabilities with q > 0");
  }
  const double pq = p * q;
  const double a_lo = std::max(q - c, 0.0);
  const double a_hi = std::min(q + c, 1.0);

  const auto feasible = [&](double t) {
    if (t <= kEps) return pq <= kEps;                  // no Q(z)=1 mass to place
    if (t >= 1.0 - kEps) return q - pq <= kEps;        // no Q(z)=0 mass to place
    const double a = pq / t;                           // P(Z=z | Q(z)=1, x)
    const double b = (q - pq) / (1.0 - t);             // P(Z=z | Q(z)=0, x)
    return a >= a_lo - kEps && a <= a_hi + kEps &&
           b >= a_lo - kEps && b <= a_hi + kEps;
  };

  const long n = std::lround(1.0 / step);
  double lo = 2.0, hi = -1.0;
  for (long i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    if (feasible(t)) {
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  if (hi < lo) throw NoFeasiblePoint("no feasible marginal on the oracle grid");
  return Interval(lo, hi);
}

JointMarginBounds sharp_bound_grid_joint(const std::array<double, 4>& p_joint,
                                         double q, double c, double step) {
  if (!(step > 0.0 && step <= 0.05)) {
    throw InvalidParams("joint oracle step must lie in (0, 0.05]");
  }
  if (!(q > 0.0 && q <= 1.0 && c >= 0.0 && c <= 1.0)) {
    throw InvalidProbability("oracle inputs must be probabilities with q > 0");
  }
  double mass = 0.0;
  for (const double pj : p_joint) {
    if (!(pj >= -kEps && pj <= 1.0 + kEps)) {
      throw InvalidProbability("joint cell probability outside [0,1]");
    }
    mass += pj;
  }
  if (std::abs(mass - 1.0) > 1e-6) {
    throw InvalidProbability("joint cell probabilities must sum to one");
  }

  const double a_lo = std::max(q - c, 0.0);
  const double a_hi = std::min(q + c, 1.0);
  const long n = std::lround(1.0 / step);
  const double half = 0.5 / static_cast<double>(n);

  // Feasible range of each latent cell mass pi_i given the observed mass
  // m_i = p_joint_i * q and a_i = m_i / pi_i constrained to [a_lo, a_hi].
  std::array<double, 4> pi_lo{}, pi_hi{};
  for (int i = 0; i < 4; ++i) {
    const double m = p_joint[i] * q;
    pi_lo[i] = a_hi > kEps ? m / a_hi : (m <= kEps ? 0.0 : 2.0);
    pi_hi[i] = a_lo > kEps ? std::min(m / a_lo, 1.0) : 1.0;
  }

  double d_lo = 2.0, d_hi = -1.0, y_lo = 2.0, y_hi = -1.0;
  // Cells indexed (y, d): 0 = (0,0), 1 = (0,1), 2 = (1,0), 3 = (1,1).
  for (long i = 0; i <= n; ++i) {
    const double pi0 = static_cast<double>(i) / n;
    if (pi0 < pi_lo[0] - half || pi0 > pi_hi[0] + half) continue;
    for (long j = 0; i + j <= n; ++j) {
      const double pi1 = static_cast<double>(j) / n;
      if (pi1 < pi_lo[1] - half || pi1 > pi_hi[1] + half) continue;
      for (long k = 0; i + j + k <= n; ++k) {
        const double pi2 = static_cast<double>(k) / n;
        if (pi2 < pi_lo[2] - half || pi2 > pi_hi[2] + half) continue;
        const double pi3 = static_cast<double>(n - i - j - k) / n;
        if (pi3 < pi_lo[3] - half || pi3 > pi_hi[3] + half) continue;
        const double d_margin = pi1 + pi3;  // D(z) = 1
        const double y_margin = pi2 + pi3;  // Y(D(z)) = 1
        d_lo = std::min(d_lo, d_margin);
        d_hi = std::max(d_hi, d_margin);
        y_lo = std::min(y_lo, y_margin);
        y_hi = std::max(y_hi, y_margin);
      }
    }
  }
  if (d_hi < d_lo) {
    throw NoFeasiblePoint("no feasible joint law on the oracle grid");
  }
  return JointMarginBounds{Interval(d_lo, d_hi), Interval(y_lo, y_hi)};
}

double breakdown_grid_scan(const CellTable& table, double mu, Target target,
                           double step, BoundVariant variant,
                           Direction direction) {
  if (!(step > 0.0 && step <= 1e-3)) {
    throw InvalidParams("breakdown scan step must lie in (0, 1e-3]");
  }
  const auto curve = [&](double c) -> double {
    switch (target) {
      case Target::first_stage: {
        const Interval b = first_stage_bounds(table, c, variant);
        return direction == Direction::at_least ? b.lb() : -b.ub();
      }
      case Target::reduced_form: {
        const Interval b = reduced_form_bounds(table, c, variant);
        return direction == Direction::at_least ? b.lb() : -b.ub();
      }
      case Target::late: {
        const Interval b = variant == BoundVariant::joint
                               ? late_bounds_joint(table, c).interval
                               : late_bounds(table, c, c).interval;
        return direction == Direction::at_least ? b.lb() : -b.ub();
      }
    }
    throw InvalidParams("unknown target");
  };
  const double mu_eff = direction == Direction::at_least ? mu : -mu;
  const long n = std::lround(1.0 / step);
  for (long i = 0; i <= n; ++i) {
    const double c = static_cast<double>(i) / static_cast<double>(n);
    if (curve(c) <= mu_eff) return c;
  }
  return 1.0;
}

double frontier_grid_scan(const CellTable& table, double c1, double mu,
                          double step, BoundVariant variant) {
  if (!(step > 0.0 && step <= 1e-3)) {
    throw InvalidParams("frontier scan step must lie in (0, 1e-3]");
  }
  const double denom = first_stage_bounds(table, c1, variant).ub();
  if (denom <= 1e-12) return 0.0;
  const long n = std::lround(1.0 / step);
  for (long i = 0; i <= n; ++i) {
    const double c2 = static_cast<double>(i) / static_cast<double>(n);
    const double lb =
        std::max(reduced_form_bounds(table, c2, variant).lb() / denom, -1.0);
    if (lb <= mu) return c2;
  }
  return 1.0;
}

}  // namespace ivbd
