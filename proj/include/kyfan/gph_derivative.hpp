#pragma once

#include "kyfan/sigma_term.hpp"
#include "kyfan/tangent_critical.hpp"

namespace kyfan {

/// Default relative tolerance of both membership tests.
inline constexpr double kGphTol = 1e-7;

/// Pairs (delta1, delta2) = ((dt, dX), (dzeta, dGamma)) in the graph of the
/// graphical derivative of N_{K°} at ((zetabar, Gammabar) | (tbar, Xbar)).
/// delta2 is always the K-side increment, so membership reads
///   Pi_K'(x; delta1 + delta2) = delta2
/// with x = (tbar, Xbar) + (zetabar, Gammabar) described by ctx.

/// ||Pi_K'(x; delta1 + delta2) - delta2|| <= tol * max(1, ||pair||).
bool member_via_dirderiv(const PointContext& ctx, const DerivativePair& pair,
                         double tol = kGphTol);

struct ConditionsReport {
  bool critical = false;       // delta2 in C_K(x)
  bool shifted_polar = false;  // delta1 - (0, U frak_X(dΓ̃) V^T) in C_K(x)°
  double identity_gap = 0.0;   // |<delta1, delta2> + Upsilon(delta2)|
  bool identity = false;
  bool holds() const { return critical && shifted_polar && identity; }
};

ConditionsReport conditions_report(const PointContext& ctx, const DerivativePair& pair,
                                   double tol = kGphTol);
bool member_via_conditions(const PointContext& ctx, const DerivativePair& pair,
                           double tol = kGphTol);

/// delta2 = Pi_K'(x; w), delta1 = w - delta2.
DerivativePair generate_member_pair(const PointContext& ctx, const ConePoint& w);

double pair_norm(const DerivativePair& pair);

}  // namespace kyfan
