#pragma once

#include "kyfan/cone_core.hpp"

namespace kyfan {

/// Everything the derivative, critical-cone and sigma-term routines need at
/// a point x = (tbar, Xbar) + (zetabar, Gammabar): the frame of X, the
/// projection data, divided differences and the alpha/beta/gamma split.
struct PointContext {
  int k = 1;
  ConePoint point;  // after snapping
  ProjectionResult proj;
  HadamardCoeffs coeffs;
  bool snapped = false;

  /// Indices into frame().groups.
  std::vector<int> alpha_groups, beta_groups, gamma_groups;
  IndexList alpha, beta, gamma;  // row indices
  int b_group = -1;              // position of b in frame().groups, or -1

  const SvdFrame& frame() const { return proj.frame; }
  ProjCase kase() const { return proj.kase; }
  bool boundary() const { return proj.is_boundary(); }
  /// Reduced cone carries the equality constraint (theta > 0 at a boundary point).
  bool equality() const { return boundary() && !proj.on_bdK; }
  double theta() const { return proj.theta; }
  Index m() const { return point.rows(); }
  Index n() const { return point.cols(); }
  double nu_bar() const { return proj.sigma_bar(k - 1); }
  double group_ubar(int g) const { return proj.u_bar(frame().groups[g].front()); }
  double group_sbar(int g) const { return proj.sigma_bar(frame().groups[g].front()); }
};

/// Default relative distance below which a base point is moved onto the
/// nearby boundary (of K when theta is tiny, of K° when Xbar is tiny).
inline constexpr double kSnapTol = 1e-9;

PointContext make_context(const ConePoint& x, int k, double tol = kBoundaryTol,
                          double snap_tol = kSnapTol);

}  // namespace kyfan
