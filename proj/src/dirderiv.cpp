#include "kyfan/dirderiv.hpp"

#include <algorithm>
#include <cmath>

namespace kyfan {

namespace {

IndexList range(Index from, Index to) {
  IndexList r;
  for (Index i = from; i < to; ++i) r.push_back(static_cast<int>(i));
  return r;
}

void add_block(Mat& A, const IndexList& rows, const IndexList& cols, const Mat& B) {
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) A(rows[i], cols[j]) += B(i, j);
}

Mat take(const Mat& A, const IndexList& rows, const IndexList& cols) {
  Mat B(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) B(i, j) = A(rows[i], cols[j]);
  return B;
}

Mat sym(const Mat& A) { return 0.5 * (A + A.transpose()); }
Mat skew(const Mat& A) { return 0.5 * (A - A.transpose()); }

}  // namespace

Mat assemble_xi(const PointContext& ctx, double tau, const Mat& Ht, double* phi0) {
  const ReducedStructure rs = reduced_structure(ctx);
  const ReducedPoint phi = project_C(rs, d_embed(rs, tau, Ht));
  if (phi0) *phi0 = phi.zeta;
  const Index m = ctx.m(), n = ctx.n();
  Mat Xi = t_map(ctx, Ht);
  for (std::size_t l = 0; l < rs.blocks.size(); ++l) {
    const ReducedBlock& b = rs.blocks[l];
    if (b.rect) {
      IndexList cols = b.rows;
      for (int j : range(m, n)) cols.push_back(j);
      add_block(Xi, b.rows, cols, phi.W[l]);
    } else {
      add_block(Xi, b.rows, b.rows, phi.W[l]);
    }
  }
  if (rs.variant == 1) {
    // The derivative acts as the identity on rows gamma, columns gamma and c.
    IndexList cols = ctx.gamma;
    for (int j : range(m, n)) cols.push_back(j);
    for (int i : ctx.gamma)
      for (int j : cols) Xi(i, j) = Ht(i, j);
  }
  return Xi;
}

ConePoint pi_K_dirderiv(const PointContext& ctx, const ConePoint& dir) {
  require(dir.rows() == ctx.m() && dir.cols() == ctx.n(), "direction shape mismatch");
  require(all_finite(dir), "direction must be finite");
  switch (ctx.kase()) {
    case ProjCase::interior_K:
      return dir;
    case ProjCase::interior_Kpolar:
      return ConePoint::zero(ctx.m(), ctx.n());
    default:
      break;
  }
  const SvdFrame& f = ctx.frame();
  double phi0 = 0.0;
  const Mat Xi = assemble_xi(ctx, dir.t, f.to_frame(dir.X), &phi0);
  return {phi0, f.from_frame(Xi)};
}

ConePoint pi_K_dirderiv(const DirDerivRequest& req, double tol) {
  return pi_K_dirderiv(make_context(req.base, req.k, tol), req.direction);
}

HomogeneityReport positive_homogeneity_check(const DirDerivRequest& req, double tol) {
  const PointContext ctx = make_context(req.base, req.k);
  const ConePoint d = pi_K_dirderiv(ctx, req.direction);
  HomogeneityReport rep;
  for (double s : {0.5, 2.0, 10.0}) {
    const ConePoint ds = pi_K_dirderiv(ctx, s * req.direction);
    const double err = norm(ds - s * d) / std::max(1.0, s * norm(d));
    rep.max_error = std::max(rep.max_error, err);
  }
  rep.ok = rep.max_error <= tol;
  return rep;
}

double PredicateReport::max_residual() const {
  double r = 0.0;
  for (const auto& [name, v] : residuals) r = std::max(r, v);
  return r;
}

PredicateReport fixed_point_report(const PointContext& ctx, const DerivativePair& pair,
                                   double tol) {
  PredicateReport rep;
  const double scale = std::max(1.0, norm(pair.delta1) + norm(pair.delta2));
  auto finish = [&] {
    rep.holds = rep.max_residual() <= tol * scale;
    return rep;
  };
  if (ctx.kase() == ProjCase::interior_K) {
    rep.residuals.push_back({"delta1", norm(pair.delta1)});
    return finish();
  }
  if (ctx.kase() == ProjCase::interior_Kpolar) {
    rep.residuals.push_back({"delta2", norm(pair.delta2)});
    return finish();
  }

  const SvdFrame& f = ctx.frame();
  const Index m = ctx.m(), n = ctx.n();
  const Mat dX = f.to_frame(pair.delta1.X);
  const Mat dG = f.to_frame(pair.delta2.X);
  const Mat Ht = dX + dG;
  const double tau = pair.delta1.t + pair.delta2.t;
  const ReducedStructure rs = reduced_structure(ctx);
  const ReducedPoint phi = project_C(rs, d_embed(rs, tau, Ht));

  const Mat E1 = ctx.coeffs.E1, E2 = ctx.coeffs.E2, F = ctx.coeffs.F;
  const Mat GX = sym(dX.leftCols(m)), GG = sym(dG.leftCols(m));
  const Mat HX = skew(dX.leftCols(m)), HG = skew(dG.leftCols(m));

  // Row labels: 0 alpha, 1 beta, 2 gamma; group index; b membership.
  std::vector<int> cls(m, 2), grp(m, -1);
  std::vector<bool> in_b(m, false);
  for (int i : ctx.alpha) cls[i] = 0;
  for (int i : ctx.beta) cls[i] = 1;
  for (int g = 0; g < static_cast<int>(f.groups.size()); ++g)
    for (int i : f.groups[g]) {
      grp[i] = g;
      in_b[i] = g == ctx.b_group;
    }
  const IndexList cols_c = range(m, n);

  auto pairs_max = [&](auto&& pred, auto&& value) {
    double r = 0.0;
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j)
        if (pred(i, j)) r = std::max(r, std::abs(value(i, j)));
    return r;
  };
  auto rows_c_max = [&](auto&& pred, auto&& value) {
    double r = 0.0;
    for (Index i = 0; i < m; ++i)
      if (pred(i))
        for (Index j = 0; j < n - m; ++j) r = std::max(r, std::abs(value(i, j)));
    return r;
  };
  auto sym_relation = [&](Index i, Index j) {
    return GG(i, j) - E1(i, j) * GG(i, j) - E1(i, j) * GX(i, j);
  };
  auto skew_relation = [&](Index i, Index j) {
    return HG(i, j) - E2(i, j) * HG(i, j) - E2(i, j) * HX(i, j);
  };
  auto c_relation = [&](Index i, Index j) {
    return dG(i, m + j) - F(i, j) * dG(i, m + j) - F(i, j) * dX(i, m + j);
  };
  auto cross = [&](Index i, Index j, int a, int b) {
    return (cls[i] == a && cls[j] == b) || (cls[i] == b && cls[j] == a);
  };

  rep.residuals.push_back({"phi0", std::abs(pair.delta2.t - phi.zeta)});
  double blocks = 0.0, rect = 0.0;
  for (std::size_t l = 0; l < rs.blocks.size(); ++l) {
    const ReducedBlock& b = rs.blocks[l];
    if (b.rect) {
      IndexList cols = b.rows;
      cols.insert(cols.end(), cols_c.begin(), cols_c.end());
      rect = (take(dG, b.rows, cols) - phi.W[l]).cwiseAbs().maxCoeff();
    } else {
      blocks = std::max(blocks, (sym(take(dG, b.rows, b.rows)) - phi.W[l]).cwiseAbs().maxCoeff());
    }
  }
  rep.residuals.push_back({"phi_blocks", blocks});
  auto alpha_off = [&](Index i, Index j) { return cls[i] == 0 && cls[j] == 0 && grp[i] != grp[j]; };
  auto beta_off = [&](Index i, Index j) { return cls[i] == 1 && cls[j] == 1 && grp[i] != grp[j]; };

  if (rs.variant == 1) {
    rep.residuals.push_back({"alpha_offdiag_sym", pairs_max(alpha_off, [&](Index i, Index j) { return GX(i, j); })});
    rep.residuals.push_back({"beta_offdiag_sym", pairs_max(beta_off, [&](Index i, Index j) { return GG(i, j); })});
    rep.residuals.push_back({"alpha_beta_sym", pairs_max([&](Index i, Index j) { return cross(i, j, 0, 1); }, sym_relation)});
    rep.residuals.push_back({"alpha_gamma_sym", pairs_max([&](Index i, Index j) { return cross(i, j, 0, 2); }, sym_relation)});
    rep.residuals.push_back({"beta_gamma_sym", pairs_max([&](Index i, Index j) { return cross(i, j, 1, 2); }, sym_relation)});
    rep.residuals.push_back({"skew", pairs_max([&](Index i, Index j) { return cls[i] != 2 || cls[j] != 2; }, skew_relation)});
    rep.residuals.push_back({"c_columns", rows_c_max([&](Index i) { return cls[i] != 2; }, c_relation)});
    double g = 0.0;
    for (int i : ctx.gamma) {
      for (int j : ctx.gamma) g = std::max(g, std::abs(dX(i, j)));
      for (int j : cols_c) g = std::max(g, std::abs(dX(i, j)));
    }
    rep.residuals.push_back({"gamma_rows", g});
  } else {
    rep.residuals.push_back({"rect_block", rect});
    rep.residuals.push_back({"alpha_offdiag_sym", pairs_max(alpha_off, [&](Index i, Index j) { return GX(i, j); })});
    rep.residuals.push_back({"beta_offdiag", pairs_max(beta_off, [&](Index i, Index j) { return dG(i, j); })});
    rep.residuals.push_back({"alpha_beta_sym", pairs_max([&](Index i, Index j) { return cross(i, j, 0, 1); }, sym_relation)});
    rep.residuals.push_back({"beta_c_columns", rows_c_max([&](Index i) { return cls[i] == 1 && !in_b[i]; },
                                                          [&](Index i, Index j) { return dG(i, m + j); })});
    rep.residuals.push_back({"alpha_alpha_skew", pairs_max([&](Index i, Index j) { return cls[i] == 0 && cls[j] == 0; }, skew_relation)});
    rep.residuals.push_back({"alpha_beta_skew", pairs_max([&](Index i, Index j) { return cross(i, j, 0, 1); }, skew_relation)});
    rep.residuals.push_back({"alpha_c_columns", rows_c_max([&](Index i) { return cls[i] == 0; }, c_relation)});
    rep.residuals.push_back({"beta_diag_skew", pairs_max([&](Index i, Index j) { return cls[i] == 1 && !in_b[i] && grp[i] == grp[j]; },
                                                         [&](Index i, Index j) { return HG(i, j); })});
  }
  return finish();
}

bool fixed_point_predicate(const PointContext& ctx, const DerivativePair& pair, double tol) {
  return fixed_point_report(ctx, pair, tol).holds;
}

}  // namespace kyfan
