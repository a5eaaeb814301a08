#include "kyfan/tangent_critical.hpp"

#include <algorithm>

namespace kyfan {

namespace {

Mat take(const Mat& A, const IndexList& rows, const IndexList& cols) {
  Mat B(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) B(i, j) = A(rows[i], cols[j]);
  return B;
}

void put(Mat& A, const IndexList& rows, const IndexList& cols, const Mat& B) {
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) A(rows[i], cols[j]) = B(i, j);
}

IndexList with_c(IndexList rows, Index m, Index n) {
  for (Index j = m; j < n; ++j) rows.push_back(static_cast<int>(j));
  return rows;
}

// (1 - E) / E, or 0 where E vanishes.
double ratio(double e) { return e > 0.0 ? (1.0 - e) / e : 0.0; }

std::vector<int> row_classes(const PointContext& ctx) {
  std::vector<int> cls(ctx.m(), 2);
  for (int i : ctx.alpha) cls[i] = 0;
  for (int i : ctx.beta) cls[i] = 1;
  return cls;
}

}  // namespace

bool in_tangent_K(const CriticalConeContext& ctx, const ConePoint& dir, double tol) {
  const double slack = tol * std::max(1.0, norm(dir));
  switch (ctx.kase()) {
    case ProjCase::interior_K:
      return true;
    case ProjCase::interior_Kpolar:
      return in_K(dir, ctx.k, slack);
    default:
      break;
  }
  const Mat Zt = ctx.frame().to_frame(dir.X);
  double lhs = 0.0;
  for (int i : ctx.alpha) lhs += Zt(i, i);
  const int j = ctx.k - ctx.proj.k0;
  if (ctx.kase() == ProjCase::boundary_pos) {
    const Mat B = take(Zt, ctx.beta, ctx.beta);
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (B + B.transpose()), Eigen::EigenvaluesOnly);
    lhs += topk_sum(es.eigenvalues(), j);
  } else {
    const Mat B = take(Zt, ctx.beta, with_c(ctx.beta, ctx.m(), ctx.n()));
    lhs += topk_sum(Eigen::JacobiSVD<Mat>(B).singularValues(), j);
  }
  return lhs <= dir.t + slack;
}

ConePoint project_critical_cone(const CriticalConeContext& ctx, const ConePoint& dir) {
  switch (ctx.kase()) {
    case ProjCase::interior_K:
      return dir;
    case ProjCase::interior_Kpolar:
      return ConePoint::zero(ctx.m(), ctx.n());
    default:
      break;
  }
  const SvdFrame& f = ctx.frame();
  const Index m = ctx.m(), n = ctx.n();
  const Mat Zt = f.to_frame(dir.X);
  const ReducedStructure rs = reduced_structure(ctx);
  const ReducedPoint P = project_C(rs, d_embed(rs, dir.t, Zt));
  Mat out = Zt;
  for (std::size_t l = 0; l < rs.blocks.size(); ++l) {
    const ReducedBlock& b = rs.blocks[l];
    if (b.rect) {
      put(out, b.rows, with_c(b.rows, m, n), P.W[l]);
      continue;
    }
    const Mat B = take(Zt, b.rows, b.rows);
    const bool drop_skew = rs.variant == 2 && rs.equality && b.beta;
    put(out, b.rows, b.rows, drop_skew ? P.W[l] : Mat(P.W[l] + 0.5 * (B - B.transpose())));
  }
  if (rs.equality) {
    for (int g1 : ctx.beta_groups) {
      for (int g2 : ctx.beta_groups) {
        if (g1 == g2) continue;
        for (int i : f.groups[g1])
          for (int j : f.groups[g2])
            out(i, j) = rs.variant == 1 ? 0.5 * (Zt(i, j) - Zt(j, i)) : 0.0;
      }
      if (rs.variant == 2 && g1 != ctx.b_group)
        for (int i : f.groups[g1])
          for (Index j = m; j < n; ++j) out(i, j) = 0.0;
    }
  }
  return {P.zeta, f.from_frame(out)};
}

bool in_critical_cone(const CriticalConeContext& ctx, const ConePoint& dir, double tol) {
  return norm(dir - project_critical_cone(ctx, dir)) <= tol * std::max(1.0, norm(dir));
}

Mat frak_X(const CriticalConeContext& ctx, const Mat& A) {
  const Index m = ctx.m(), n = ctx.n();
  Mat out = Mat::Zero(m, n);
  if (!ctx.boundary()) return out;
  const std::vector<int> cls = row_classes(ctx);
  const bool case1 = ctx.kase() == ProjCase::boundary_pos;
  const Mat& E1 = ctx.coeffs.E1;
  const Mat& E2 = ctx.coeffs.E2;
  const Mat& F = ctx.coeffs.F;
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      const double g = 0.5 * (A(i, j) + A(j, i)), h = 0.5 * (A(i, j) - A(j, i));
      const int a = cls[i], b = cls[j];
      bool use_g, use_h;
      if (case1) {
        use_g = a != b;
        use_h = a != 2 || b != 2;
      } else {
        use_g = a != b;
        use_h = a == 0 || b == 0;
      }
      if (use_g) out(i, j) += ratio(E1(i, j)) * g;
      if (use_h) out(i, j) += ratio(E2(i, j)) * h;
    }
    const bool use_f = case1 ? cls[i] != 2 : cls[i] == 0;
    if (use_f)
      for (Index j = m; j < n; ++j) out(i, j) = ratio(F(i, j - m)) * A(i, j);
  }
  return out;
}

ConePoint polar_shift(const CriticalConeContext& ctx, const DerivativePair& pair) {
  const SvdFrame& f = ctx.frame();
  const Mat shift = frak_X(ctx, f.to_frame(pair.delta2.X));
  return {pair.delta1.t, pair.delta1.X - f.from_frame(shift)};
}

bool in_critical_polar_shifted(const CriticalConeContext& ctx, const DerivativePair& pair,
                               double tol) {
  const ConePoint v = polar_shift(ctx, pair);
  return norm(project_critical_cone(ctx, v)) <= tol * std::max(1.0, norm(v));
}

}  // namespace kyfan
