#pragma once

#include <array>

#include "ivbd/bounds.hpp"
#include "ivbd/types.hpp"

namespace ivbd {

/// Brute-force verifiers. These exist to certify the closed-form bounds and
/// the root finder on small instances, not to run at production speed.

/// Grid search over t = P(Q(z)=1 | x): t is feasible iff the implied
/// assignment probabilities a = p*q/t (given Q(z)=1) and b = (q - p*q)/(1-t)
/// (given Q(z)=0) lie in [0,1] and within c of q. Returns the feasible range.
Interval sharp_bound_grid(double p, double q, double c, double step = 1e-4);

struct JointMarginBounds {
  Interval d_margin;  // feasible range of P(D(z)=1 | x)
  Interval y_margin;  // feasible range of P(Y(D(z))=1 | x)
};

/// Exhaustive scan of the 3-simplex of the latent four-cell joint law of
/// (Y(D(z)), D(z)) at resolution `step`. A candidate law is feasible iff all
/// four implied conditional assignment probabilities lie in [0,1] and within
/// c of q, and the law reproduces the observed joint masses p_joint * q.
/// `p_joint` holds P(Y=y, D=d | Z=z, x) indexed by 2y + d.
JointMarginBounds sharp_bound_grid_joint(const std::array<double, 4>& p_joint,
                                         double q, double c, double step = 0.01);

/// Smallest grid value of c with tau_lb(c) <= mu, scanning ascending from 0;
/// returns 1 when the conclusion never breaks. Targets use the same curves as
/// the breakdown module's root finder.
double breakdown_grid_scan(const CellTable& table, double mu, Target target,
                           double step = 1e-3,
                           BoundVariant variant = BoundVariant::separate,
                           Direction direction = Direction::at_least);

/// 2-D analog for the frontier: smallest grid c2 with
/// max(tauY_lb(c2) / tauD_ub(c1), -1) <= mu at the given c1.
double frontier_grid_scan(const CellTable& table, double c1, double mu,
                          double step = 1e-3,
                          BoundVariant variant = BoundVariant::separate);

}  // namespace ivbd
