#pragma once

#include "kyfan/types.hpp"

namespace kyfan {

/// Full SVD X = U [Diag(sigma) 0] V^T (m <= n) together with the index
/// partition used throughout: a = {sigma > 0}, b = {sigma = 0}, c = the
/// trailing n - m columns of V, and the groups of equal singular values.
struct SvdFrame {
  Mat U;      // m x m
  Mat V;      // n x n
  Vec sigma;  // nonincreasing, length m
  IndexList a, b, c;
  /// a_1, ..., a_r in decreasing order of value, then b when it is nonempty.
  std::vector<IndexList> groups;
  Vec nu;  // distinct positive singular values, one per a-group
  double zero_tol = 0.0;
  double group_tol = 0.0;

  Index m() const { return U.rows(); }
  Index n() const { return V.rows(); }
  int r() const { return static_cast<int>(nu.size()); }
  bool has_b_group() const { return !b.empty(); }
  /// Group index containing row i.
  int group_of(int i) const;
  Mat V1() const { return V.leftCols(m()); }
  Mat V2() const { return V.rightCols(n() - m()); }
  /// U [Diag(s) 0] V^T for a vector s of length m.
  Mat compose(const Vec& s) const;
  /// U^T Z V
  Mat to_frame(const Mat& Z) const { return U.transpose() * Z * V; }
  /// U Zt V^T
  Mat from_frame(const Mat& Zt) const { return U * Zt * V.transpose(); }
};

double default_zero_tol(double sigma1);
double default_group_tol(double sigma1);

/// Throws InvalidInput on non-finite data or m > n.
SvdFrame svd_frame(const Mat& X);
SvdFrame svd_frame(const Mat& X, double zero_tol, double group_tol);

Mat sym_part(const Mat& A);
Mat skew_part(const Mat& A);

/// Divided-difference weights of the projection derivative.
struct HadamardCoeffs {
  Mat E1;  // m x m, (sbar_i - sbar_j) / (s_i - s_j), 0 inside a group
  Mat E2;  // m x m, (sbar_i + sbar_j) / (s_i + s_j), 0 when both vanish
  Mat F;   // m x (n - m), sbar_i / s_i, 0 on b
};

/// Entries whose denominator is <= tol are set to 0.
HadamardCoeffs hadamard_coeffs(const Vec& sigma_bar, const Vec& sigma, Index n,
                               double tol);
/// Uses the frame's own groups and zero set for the vanishing pattern.
HadamardCoeffs hadamard_coeffs(const SvdFrame& frame, const Vec& sigma_bar);

/// [[0, Z], [Z^T, 0]]
Mat b_operator(const Mat& Z);

/// Orthogonal P with P^T B(X) P = Diag(sigma_a, 0_b, 0_c, -0_b, -reverse(sigma_a)).
Mat build_pbar(const SvdFrame& frame);

}  // namespace kyfan
