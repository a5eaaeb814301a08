#pragma once

#include "kyfan/context.hpp"

namespace kyfan {

/// Base data of the sigma term: the pair ((tbar, Xbar), (zetabar, Gammabar))
/// in gph N_K, carried by the context of their sum.
using UpsilonContext = PointContext;

/// Relative truncation for the pseudo-inverses.
inline constexpr double kPinvRankTol = 1e-10;

/// The sigma term Upsilon((zetabar, Gammabar), dir), from the pseudo-inverse
/// formula. Zero when Xbar = 0 or Gammabar = 0.
double upsilon(const UpsilonContext& ctx, const ConePoint& dir);

/// The same quantity through group-level block sums weighted by theta,
/// u_bar and the singular values of Xbar. Returns <frak_X(dΓ̃), dΓ̃>, which
/// equals -upsilon(ctx, dir) when dir lies in the critical cone.
double upsilon_expanded(const UpsilonContext& ctx, const ConePoint& dir);

/// Moore-Penrose inverse of a symmetric matrix with relative truncation.
Mat pinv_symmetric(const Mat& A, double rank_tol = kPinvRankTol);

}  // namespace kyfan
