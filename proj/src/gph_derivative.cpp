#include "kyfan/gph_derivative.hpp"

#include <cmath>

namespace kyfan {

double pair_norm(const DerivativePair& pair) {
  const double a = norm(pair.delta1), b = norm(pair.delta2);
  return std::sqrt(a * a + b * b);
}

bool member_via_dirderiv(const PointContext& ctx, const DerivativePair& pair, double tol) {
  const ConePoint d = pi_K_dirderiv(ctx, pair.delta1 + pair.delta2);
  return norm(d - pair.delta2) <= tol * std::max(1.0, pair_norm(pair));
}

ConditionsReport conditions_report(const PointContext& ctx, const DerivativePair& pair,
                                   double tol) {
  ConditionsReport r;
  r.critical = in_critical_cone(ctx, pair.delta2, tol);
  r.shifted_polar = in_critical_polar_shifted(ctx, pair, tol);
  r.identity_gap = std::abs(inner(pair.delta1, pair.delta2) + upsilon(ctx, pair.delta2));
  r.identity = r.identity_gap <= tol * std::max(1.0, norm(pair.delta1) * norm(pair.delta2));
  return r;
}

bool member_via_conditions(const PointContext& ctx, const DerivativePair& pair, double tol) {
  return conditions_report(ctx, pair, tol).holds();
}

DerivativePair generate_member_pair(const PointContext& ctx, const ConePoint& w) {
  const ConePoint d2 = pi_K_dirderiv(ctx, w);
  return {w - d2, d2};
}

}  // namespace kyfan
