#include "kyfan/spectral_frames.hpp"

#include <algorithm>
#include <cmath>

namespace kyfan {

double default_zero_tol(double sigma1) { return 1e-9 * sigma1; }
double default_group_tol(double sigma1) { return 1e-8 * sigma1; }

int SvdFrame::group_of(int i) const {
  for (int l = 0; l < static_cast<int>(groups.size()); ++l)
    for (int j : groups[l])
      if (j == i) return l;
  return -1;
}

Mat SvdFrame::compose(const Vec& s) const {
  return U * s.asDiagonal() * V1().transpose();
}

SvdFrame svd_frame(const Mat& X) {
  require(X.allFinite(), "svd_frame: non-finite entries");
  require(X.rows() <= X.cols(), "svd_frame: expected m <= n");
  Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
  double s1 = X.rows() > 0 ? svd.singularValues()(0) : 0.0;
  return svd_frame(X, default_zero_tol(s1), default_group_tol(s1));
}

SvdFrame svd_frame(const Mat& X, double zero_tol, double group_tol) {
  require(X.allFinite(), "svd_frame: non-finite entries");
  require(X.rows() <= X.cols(), "svd_frame: expected m <= n");
  const Index m = X.rows(), n = X.cols();
  Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);

  SvdFrame f;
  f.U = svd.matrixU();
  f.V = svd.matrixV();
  f.sigma = svd.singularValues();
  f.zero_tol = zero_tol;
  f.group_tol = group_tol;

  // Sign convention: the largest-magnitude entry of each U column is >= 0.
  for (Index j = 0; j < m; ++j) {
    Index imax = 0;
    f.U.col(j).cwiseAbs().maxCoeff(&imax);
    if (f.U(imax, j) < 0) {
      f.U.col(j) *= -1.0;
      f.V.col(j) *= -1.0;
    }
  }
  for (Index j = m; j < n; ++j) {
    Index imax = 0;
    f.V.col(j).cwiseAbs().maxCoeff(&imax);
    if (f.V(imax, j) < 0) f.V.col(j) *= -1.0;
  }

  for (Index i = 0; i < m; ++i) {
    if (f.sigma(i) > zero_tol)
      f.a.push_back(static_cast<int>(i));
    else
      f.b.push_back(static_cast<int>(i));
  }
  for (Index j = m; j < n; ++j) f.c.push_back(static_cast<int>(j));

  std::vector<double> nus;
  for (int i : f.a) {
    if (f.groups.empty() || f.sigma(f.groups.back().front()) - f.sigma(i) > group_tol) {
      f.groups.push_back({i});
      nus.push_back(f.sigma(i));
    } else {
      f.groups.back().push_back(i);
    }
  }
  // Representative value is the group mean.
  for (std::size_t l = 0; l < f.groups.size(); ++l) {
    double s = 0;
    for (int i : f.groups[l]) s += f.sigma(i);
    nus[l] = s / static_cast<double>(f.groups[l].size());
  }
  f.nu = Eigen::Map<Vec>(nus.data(), static_cast<Index>(nus.size()));
  if (!f.b.empty()) f.groups.push_back(f.b);
  return f;
}

Mat sym_part(const Mat& A) {
  require(A.rows() == A.cols(), "sym_part: matrix must be square");
  return 0.5 * (A + A.transpose());
}

Mat skew_part(const Mat& A) {
  require(A.rows() == A.cols(), "skew_part: matrix must be square");
  return 0.5 * (A - A.transpose());
}

HadamardCoeffs hadamard_coeffs(const Vec& sigma_bar, const Vec& sigma, Index n,
                               double tol) {
  require(sigma_bar.size() == sigma.size(), "hadamard_coeffs: length mismatch");
  const Index m = sigma.size();
  require(n >= m, "hadamard_coeffs: n < m");
  HadamardCoeffs h{Mat::Zero(m, m), Mat::Zero(m, m), Mat::Zero(m, n - m)};
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      double dm = sigma(i) - sigma(j);
      if (std::abs(dm) > tol) h.E1(i, j) = (sigma_bar(i) - sigma_bar(j)) / dm;
      double dp = sigma(i) + sigma(j);
      if (dp > tol) h.E2(i, j) = (sigma_bar(i) + sigma_bar(j)) / dp;
    }
    if (sigma(i) > tol) h.F.row(i).setConstant(sigma_bar(i) / sigma(i));
  }
  return h;
}

HadamardCoeffs hadamard_coeffs(const SvdFrame& f, const Vec& sigma_bar) {
  const Index m = f.m(), n = f.n();
  HadamardCoeffs h{Mat::Zero(m, m), Mat::Zero(m, m), Mat::Zero(m, n - m)};
  std::vector<int> gid(m);
  for (int l = 0; l < static_cast<int>(f.groups.size()); ++l)
    for (int i : f.groups[l]) gid[i] = l;
  std::vector<bool> zero(m, false);
  for (int i : f.b) zero[i] = true;
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      if (gid[i] != gid[j])
        h.E1(i, j) = (sigma_bar(i) - sigma_bar(j)) / (f.sigma(i) - f.sigma(j));
      if (!(zero[i] && zero[j]))
        h.E2(i, j) = (sigma_bar(i) + sigma_bar(j)) / (f.sigma(i) + f.sigma(j));
    }
    if (!zero[i]) h.F.row(i).setConstant(sigma_bar(i) / f.sigma(i));
  }
  return h;
}

Mat b_operator(const Mat& Z) {
  const Index m = Z.rows(), n = Z.cols();
  Mat B = Mat::Zero(m + n, m + n);
  B.topRightCorner(m, n) = Z;
  B.bottomLeftCorner(n, m) = Z.transpose();
  return B;
}

Mat build_pbar(const SvdFrame& f) {
  const Index m = f.m(), n = f.n();
  const Index na = static_cast<Index>(f.a.size());
  const double r2 = std::sqrt(2.0);
  Mat P = Mat::Zero(m + n, m + n);
  Index col = 0;
  auto put = [&](int i, double su, double sv) {
    P.block(0, col, m, 1) = su * f.U.col(i) / r2;
    P.block(m, col, n, 1) = sv * f.V.col(i) / r2;
    ++col;
  };
  for (int i : f.a) put(i, 1, 1);
  for (int i : f.b) put(i, 1, 1);
  for (int j : f.c) {
    P.block(m, col, n, 1) = f.V.col(j);
    ++col;
  }
  for (int i : f.b) put(i, 1, -1);
  for (Index q = na - 1; q >= 0; --q) put(f.a[q], 1, -1);
  return P;
}

}  // namespace kyfan
