#include "kyfan/sigma_term.hpp"

#include <cmath>

namespace kyfan {

Mat pinv_symmetric(const Mat& A, double rank_tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()));
  const Vec& lam = es.eigenvalues();
  const double cut = rank_tol * (lam.size() ? lam.cwiseAbs().maxCoeff() : 0.0);
  Vec inv(lam.size());
  for (Index i = 0; i < lam.size(); ++i) inv(i) = std::abs(lam(i)) > cut ? 1.0 / lam(i) : 0.0;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

namespace {

// (1/sqrt 2) [U_rows; V_rows]
Mat lifted_columns(const SvdFrame& f, const IndexList& rows) {
  const Index m = f.m(), n = f.n();
  Mat P(m + n, rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    P.col(j).head(m) = f.U.col(rows[j]);
    P.col(j).tail(n) = f.V.col(rows[j]);
  }
  return P / std::sqrt(2.0);
}

bool trivial(const UpsilonContext& ctx) {
  if (!ctx.boundary() || ctx.theta() <= 0.0) return true;
  return ctx.proj.sigma_bar.size() == 0 || ctx.proj.sigma_bar(0) <= 0.0;
}

}  // namespace

double upsilon(const UpsilonContext& ctx, const ConePoint& dir) {
  require(dir.rows() == ctx.m() && dir.cols() == ctx.n(), "direction shape mismatch");
  if (trivial(ctx)) return 0.0;
  const SvdFrame& f = ctx.frame();
  const Index m = ctx.m(), n = ctx.n();
  const double theta = ctx.theta();
  const Mat Xbar = ctx.proj.onto_K.X;
  const Mat BH = b_operator(dir.X);
  const Mat BX = b_operator(Xbar);
  const Mat I = Mat::Identity(m + n, m + n);

  double val = 0.0;
  for (int g : ctx.alpha_groups) {
    const Mat P = lifted_columns(f, f.groups[g]);
    const Mat M = P.transpose() * BH * pinv_symmetric(BX - ctx.group_sbar(g) * I) * BH * P;
    val += theta * 2.0 * M.trace();
  }
  const Vec& u = ctx.proj.u_bar;
  if (ctx.kase() == ProjCase::boundary_pos) {
    const Mat P = lifted_columns(f, ctx.beta);
    const Mat M = 2.0 * P.transpose() * BH * pinv_symmetric(BX - ctx.nu_bar() * I) * BH * P;
    for (std::size_t i = 0; i < ctx.beta.size(); ++i) val += theta * u(ctx.beta[i]) * M(i, i);
  } else {
    // Xbar^+ = V1 Diag(1 / sigma_bar) U^T on the support of sigma_bar.
    const Vec& sb = ctx.proj.sigma_bar;
    const double cut = kPinvRankTol * sb(0);
    Vec inv(m);
    for (Index i = 0; i < m; ++i) inv(i) = sb(i) > cut ? 1.0 / sb(i) : 0.0;
    const Mat Xpinv = f.V1() * inv.asDiagonal() * f.U.transpose();
    const Mat M = dir.X * Xpinv * dir.X;
    for (int i : ctx.beta) val += 2.0 * theta * u(i) * f.U.col(i).dot(M * f.V.col(i));
  }
  if (!std::isfinite(val)) throw NumericFailure("upsilon: non-finite value");
  return val;
}

double upsilon_expanded(const UpsilonContext& ctx, const ConePoint& dir) {
  require(dir.rows() == ctx.m() && dir.cols() == ctx.n(), "direction shape mismatch");
  if (!ctx.boundary() || ctx.theta() <= 0.0) return 0.0;
  const SvdFrame& f = ctx.frame();
  const Index m = ctx.m(), n = ctx.n();
  const double theta = ctx.theta();
  const bool case1 = ctx.kase() == ProjCase::boundary_pos;
  const Mat D = f.to_frame(dir.X);
  const Mat G = 0.5 * (D.leftCols(m) + D.leftCols(m).transpose());
  const Mat H = 0.5 * (D.leftCols(m) - D.leftCols(m).transpose());

  const int ng = static_cast<int>(f.groups.size());
  std::vector<int> cls(ng);
  for (int g = 0; g < ng; ++g) cls[g] = static_cast<int>(ctx.proj.group_class[g]);
  auto block_sq = [&](const Mat& A, int g1, int g2) {
    double s = 0.0;
    for (int i : f.groups[g1])
      for (int j : f.groups[g2]) s += A(i, j) * A(i, j);
    return s;
  };

  double val = 0.0;
  for (int l = 0; l < ng; ++l) {
    const double nl = ctx.group_sbar(l), ul = ctx.group_ubar(l);
    for (int lp = 0; lp < ng; ++lp) {
      const double nlp = ctx.group_sbar(lp), ulp = ctx.group_ubar(lp);
      const bool use_g = cls[l] != cls[lp] && (case1 || cls[l] != 2);
      const bool use_h = case1 ? (cls[l] != 2 || cls[lp] != 2) : (cls[l] == 0 || cls[lp] == 0);
      if (use_g) val += theta * (ul - ulp) / (nl - nlp) * block_sq(G, l, lp);
      if (use_h && nl + nlp > 0) val += theta * (ul + ulp) / (nl + nlp) * block_sq(H, l, lp);
    }
    const bool use_c = case1 ? cls[l] != 2 : cls[l] == 0;
    if (use_c && nl > 0 && n > m) {
      double s = 0.0;
      for (int i : f.groups[l]) s += D.row(i).tail(n - m).squaredNorm();
      val += theta * ul / nl * s;
    }
  }
  return val;
}

}  // namespace kyfan
