#pragma once

#include "kyfan/context.hpp"
#include "kyfan/topk_kernel.hpp"

namespace kyfan {

/// One diagonal block of the reduced space: G(Z_{a_l a_l}) for a group a_l,
/// or the rectangular [Z_bb Z_bc] in the sigma_k(Xbar) = 0 case.
struct ReducedBlock {
  int group = -1;   // index into frame().groups
  IndexList rows;   // frame row indices
  bool rect = false;
  bool beta = false;
  double ubar = 0.0;
};

/// Shape of the reduced cone C1 (sigma_k(Xbar) > 0) or C2 (sigma_k(Xbar) = 0)
/// at a boundary point:
///   sum_alpha tr(W_l) + g(kappa_beta) <= zeta
///   sum_alpha tr(W_l) + sum_beta ubar_l tr(W_l)  = zeta   (only when theta > 0)
/// where g sums the k - k0 largest eigenvalues (C1) or the largest absolute
/// eigenvalues and singular values (C2) of the beta blocks.
struct ReducedStructure {
  int variant = 1;
  bool equality = false;
  bool full_sum = true;  // variant 2: sum of ubar over beta equals k - k0
  int j = 1;             // k - k0
  Index m = 0, n = 0;
  std::vector<ReducedBlock> blocks;
};

struct ReducedPoint {
  double zeta = 0.0;
  std::vector<Mat> W;
};

double inner(const ReducedPoint& a, const ReducedPoint& b);
double norm(const ReducedPoint& a);
ReducedPoint operator-(const ReducedPoint& a, const ReducedPoint& b);
ReducedPoint operator+(const ReducedPoint& a, const ReducedPoint& b);
ReducedPoint operator*(double s, const ReducedPoint& a);

/// Requires a boundary context.
ReducedStructure reduced_structure(const PointContext& ctx);

/// D(Zt) for Zt = U^T Z V given in frame coordinates.
ReducedPoint d_embed(const ReducedStructure& rs, double tau, const Mat& Zt);

/// T(Zt) = [E1 o G(Zt_1) + E2 o H(Zt_1), F o Zt_2].
Mat t_map(const PointContext& ctx, const Mat& Zt);

/// Spectral data of a reduced point in block order.
struct ReducedSpectrum {
  Vec kappa_alpha, kappa_beta;
  Vec u_beta;                 // ubar of the owning block, per beta entry
  std::vector<int> cls_beta;  // 1: ubar = 1, 2: fractional, 3: ubar = 0
  std::vector<Mat> left, right;  // eigenvectors, or singular vectors for rect
  std::vector<Index> offset;     // first entry of each block in its kappa vector
};
ReducedSpectrum reduced_spectrum(const ReducedStructure& rs, const ReducedPoint& p);

bool in_C(const ReducedStructure& rs, const ReducedPoint& p, double tol);
ReducedPoint project_C(const ReducedStructure& rs, const ReducedPoint& p);
/// Membership in C° via ||Pi_C(p)|| <= tol.
bool in_C_polar(const ReducedStructure& rs, const ReducedPoint& p, double tol);

}  // namespace kyfan
