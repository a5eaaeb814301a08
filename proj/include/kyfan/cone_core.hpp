#pragma once

#include "kyfan/spectral_frames.hpp"

namespace kyfan {

/// Default relative tolerance for boundary classification.
inline constexpr double kBoundaryTol = 1e-12;

enum class ProjCase { interior_K, interior_Kpolar, boundary_pos, boundary_zero };
const char* to_string(ProjCase c);

enum class GroupClass { alpha, beta, gamma };

/// Projection of p = (t, X) onto K = {(t, X) : ||sigma(X)||_(k) <= t} and its
/// polar, with the index data needed by the derivative routines.
struct ProjectionResult {
  int k = 1;
  ConePoint onto_K;
  ConePoint onto_Kpolar;
  double theta = 0.0;  // onto_Kpolar = (-theta, U Diag(theta * u_bar) V1^T)
  Vec u_bar;
  int k0 = 0, k1 = 0;
  ProjCase kase = ProjCase::interior_K;
  /// Boundary point of K itself (theta = 0). The reduced cone then carries
  /// no equality constraint.
  bool on_bdK = false;
  IndexList beta1, beta2, beta3;  // u_bar = 1, 0 < u_bar < 1, u_bar = 0 on beta
  SvdFrame frame;                 // frame of X
  Vec sigma_bar;                  // singular values of the K-part
  std::vector<GroupClass> group_class;  // one per frame group (boundary cases)
  bool is_boundary() const {
    return kase == ProjCase::boundary_pos || kase == ProjCase::boundary_zero;
  }
};

double kyfan_norm(const Vec& x, int k);
bool in_K(const ConePoint& p, int k, double tol);
bool in_Kpolar(const ConePoint& p, int k, double tol);

/// Points within tol * max(1, |t|, sigma_1) of bd K or bd K° are classified
/// as boundary points and projected exactly onto that boundary.
ProjectionResult project_K(const ConePoint& p, int k, double tol = kBoundaryTol);
/// Same decomposition; Pi_{K°} = id - Pi_K is carried in onto_Kpolar.
ProjectionResult project_Kpolar(const ConePoint& p, int k, double tol = kBoundaryTol);

}  // namespace kyfan
