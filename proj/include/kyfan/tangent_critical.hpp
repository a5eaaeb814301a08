#pragma once

#include "kyfan/dirderiv.hpp"

namespace kyfan {

/// The context of a point x = (tbar, Xbar) + (zetabar, Gammabar) with
/// (tbar, Xbar) = Pi_K(x).
using CriticalConeContext = PointContext;

/// dir in T_K(tbar, Xbar). Interior K: always; apex (interior K°): dir in K.
bool in_tangent_K(const CriticalConeContext& ctx, const ConePoint& dir, double tol);

/// Projection onto C_K(x) = T_K(tbar, Xbar) ∩ (zetabar, Gammabar)^⊥.
///
/// In frame coordinates C_K is a product: the reduced cone C on
/// (tau, D(Z̃)), zero on the coordinates forced by the orthogonality when
/// theta > 0, and free elsewhere.
ConePoint project_critical_cone(const CriticalConeContext& ctx, const ConePoint& dir);

/// dist(dir, C_K) <= tol * max(1, ||dir||).
bool in_critical_cone(const CriticalConeContext& ctx, const ConePoint& dir, double tol);

/// The curvature operator, acting on frame coordinates. Zero outside the
/// boundary cases.
Mat frak_X(const CriticalConeContext& ctx, const Mat& A);

/// delta1 - (0, U frak_X(Ũᵀ dGamma V) Vᵀ) in the polar of C_K, decided by
/// ||Pi_{C_K}(v)|| <= tol * max(1, ||v||).
bool in_critical_polar_shifted(const CriticalConeContext& ctx, const DerivativePair& pair,
                               double tol);

/// The shifted vector v used by in_critical_polar_shifted.
ConePoint polar_shift(const CriticalConeContext& ctx, const DerivativePair& pair);

}  // namespace kyfan
