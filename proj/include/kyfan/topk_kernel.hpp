#pragma once

#include "kyfan/types.hpp"

namespace kyfan {

/// Sum of the j largest entries (sum mode) or largest magnitudes (abs mode).
double topk_sum(const Vec& z, int j);
double topk_abs(const Vec& z, int j);

/// Projection of (zeta, ka, kb) onto
///   { (eta, da, db) : sum(da) + g(db) <= eta },  g = topk_sum(., j) or topk_abs(., j).
/// theta is the multiplier of the constraint; u_beta is the subgradient of g
/// at the projected db (so da = ka - theta, db = kb - theta * u_beta).
struct EpiResult {
  double eta = 0.0;
  Vec d_alpha, d_beta;
  double theta = 0.0;
  Vec u_beta;
  int p0 = 0;               // entries of db strictly above the tie band
  double violation = 0.0;   // KKT violation of the selected pattern
};
EpiResult project_epi_topk(double zeta, const Vec& ka, const Vec& kb, int j, bool abs_mode);

/// Projection of (zeta, ka, kb) onto the face
///   { (eta, da, db) : sum(da) + <u, db> = eta,  order constraints on db },
/// where each db entry carries a class: 1 (u = 1, db_i >= tau), 2 (0 < u < 1,
/// db_i = tau) or 3 (u = 0, db_i <= tau, or |db_i| <= tau in abs mode).
/// In abs mode tau >= 0, and tau is pinned to 0 when full_sum is false.
struct FaceResult {
  double eta = 0.0;
  Vec d_alpha, d_beta;
  double violation = 0.0;
};
FaceResult project_face_topk(double zeta, const Vec& ka, const Vec& kb, const Vec& u,
                             const std::vector<int>& cls, bool abs_mode, bool full_sum);

}  // namespace kyfan
