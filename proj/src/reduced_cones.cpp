#include "kyfan/reduced_cones.hpp"

#include <cmath>

namespace kyfan {

namespace {

Mat take(const Mat& A, const IndexList& rows, const IndexList& cols) {
  Mat B(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) B(i, j) = A(rows[i], cols[j]);
  return B;
}

int weight_class(double u) {
  if (u >= 1.0 - 1e-9) return 1;
  if (u <= 1e-9) return 3;
  return 2;
}

}  // namespace

double inner(const ReducedPoint& a, const ReducedPoint& b) {
  double s = a.zeta * b.zeta;
  for (std::size_t l = 0; l < a.W.size(); ++l) s += (a.W[l].array() * b.W[l].array()).sum();
  return s;
}

double norm(const ReducedPoint& a) { return std::sqrt(inner(a, a)); }

ReducedPoint operator-(const ReducedPoint& a, const ReducedPoint& b) {
  ReducedPoint r{a.zeta - b.zeta, a.W};
  for (std::size_t l = 0; l < r.W.size(); ++l) r.W[l] -= b.W[l];
  return r;
}

ReducedPoint operator+(const ReducedPoint& a, const ReducedPoint& b) {
  ReducedPoint r{a.zeta + b.zeta, a.W};
  for (std::size_t l = 0; l < r.W.size(); ++l) r.W[l] += b.W[l];
  return r;
}

ReducedPoint operator*(double s, const ReducedPoint& a) {
  ReducedPoint r{s * a.zeta, a.W};
  for (Mat& w : r.W) w *= s;
  return r;
}

ReducedStructure reduced_structure(const PointContext& ctx) {
  require(ctx.boundary(), "reduced_structure: context is not a boundary point");
  const SvdFrame& f = ctx.frame();
  ReducedStructure rs;
  rs.variant = ctx.kase() == ProjCase::boundary_pos ? 1 : 2;
  rs.equality = ctx.equality();
  rs.j = ctx.k - ctx.proj.k0;
  rs.m = ctx.m();
  rs.n = ctx.n();
  for (int g : ctx.alpha_groups) rs.blocks.push_back({g, f.groups[g], false, false, 1.0});
  double usum = 0.0;
  for (int g : ctx.beta_groups) {
    const bool rect = rs.variant == 2 && g == ctx.b_group;
    const double u = rs.equality ? ctx.group_ubar(g) : 0.0;
    rs.blocks.push_back({g, f.groups[g], rect, true, u});
    usum += u * static_cast<double>(f.groups[g].size());
  }
  rs.full_sum = rs.variant == 1 || std::abs(usum - rs.j) <= 1e-9 * rs.j;
  return rs;
}

ReducedPoint d_embed(const ReducedStructure& rs, double tau, const Mat& Zt) {
  ReducedPoint p;
  p.zeta = tau;
  IndexList bc;
  for (const ReducedBlock& b : rs.blocks) {
    if (b.rect) {
      bc = b.rows;
      for (Index j = rs.m; j < rs.n; ++j) bc.push_back(static_cast<int>(j));
      p.W.push_back(take(Zt, b.rows, bc));
    } else {
      Mat B = take(Zt, b.rows, b.rows);
      p.W.push_back(0.5 * (B + B.transpose()));
    }
  }
  return p;
}

Mat t_map(const PointContext& ctx, const Mat& Zt) {
  const Index m = ctx.m(), n = ctx.n();
  const Mat Z1 = Zt.leftCols(m);
  const Mat G = 0.5 * (Z1 + Z1.transpose());
  const Mat H = 0.5 * (Z1 - Z1.transpose());
  Mat T(m, n);
  T.leftCols(m) = ctx.coeffs.E1.cwiseProduct(G) + ctx.coeffs.E2.cwiseProduct(H);
  T.rightCols(n - m) = ctx.coeffs.F.cwiseProduct(Zt.rightCols(n - m));
  return T;
}

ReducedSpectrum reduced_spectrum(const ReducedStructure& rs, const ReducedPoint& p) {
  require(p.W.size() == rs.blocks.size(), "reduced point does not match structure");
  ReducedSpectrum sp;
  std::vector<double> ka, kb, ub;
  for (std::size_t l = 0; l < rs.blocks.size(); ++l) {
    const ReducedBlock& b = rs.blocks[l];
    Vec vals;
    if (b.rect) {
      Eigen::JacobiSVD<Mat> svd(p.W[l], Eigen::ComputeFullU | Eigen::ComputeFullV);
      vals = svd.singularValues();
      sp.left.push_back(svd.matrixU());
      sp.right.push_back(svd.matrixV());
    } else {
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (p.W[l] + p.W[l].transpose()));
      vals = es.eigenvalues().reverse();
      sp.left.push_back(es.eigenvectors().rowwise().reverse());
      sp.right.push_back(Mat());
    }
    std::vector<double>& dst = b.beta ? kb : ka;
    sp.offset.push_back(static_cast<Index>(dst.size()));
    for (Index i = 0; i < vals.size(); ++i) {
      dst.push_back(vals(i));
      if (b.beta) {
        ub.push_back(b.ubar);
        sp.cls_beta.push_back(weight_class(b.ubar));
      }
    }
  }
  sp.kappa_alpha = Eigen::Map<Vec>(ka.data(), static_cast<Index>(ka.size()));
  sp.kappa_beta = Eigen::Map<Vec>(kb.data(), static_cast<Index>(kb.size()));
  sp.u_beta = Eigen::Map<Vec>(ub.data(), static_cast<Index>(ub.size()));
  return sp;
}

bool in_C(const ReducedStructure& rs, const ReducedPoint& p, double tol) {
  const ReducedSpectrum sp = reduced_spectrum(rs, p);
  const double A = sp.kappa_alpha.sum();
  const double g = rs.variant == 1 ? topk_sum(sp.kappa_beta, rs.j)
                                   : topk_abs(sp.kappa_beta, rs.j);
  if (A + g > p.zeta + tol) return false;
  if (rs.equality && std::abs(A + sp.u_beta.dot(sp.kappa_beta) - p.zeta) > tol) return false;
  return true;
}

ReducedPoint project_C(const ReducedStructure& rs, const ReducedPoint& p) {
  const ReducedSpectrum sp = reduced_spectrum(rs, p);
  const bool abs_mode = rs.variant == 2;
  double eta;
  Vec da, db;
  if (rs.equality) {
    FaceResult r = project_face_topk(p.zeta, sp.kappa_alpha, sp.kappa_beta, sp.u_beta,
                                     sp.cls_beta, abs_mode, rs.full_sum);
    eta = r.eta;
    da = r.d_alpha;
    db = r.d_beta;
  } else {
    EpiResult r = project_epi_topk(p.zeta, sp.kappa_alpha, sp.kappa_beta, rs.j, abs_mode);
    eta = r.eta;
    da = r.d_alpha;
    db = r.d_beta;
  }
  ReducedPoint out;
  out.zeta = eta;
  for (std::size_t l = 0; l < rs.blocks.size(); ++l) {
    const ReducedBlock& b = rs.blocks[l];
    const Vec& d = b.beta ? db : da;
    const Index sz = static_cast<Index>(b.rows.size());
    const Vec seg = d.segment(sp.offset[l], sz);
    if (b.rect) {
      Mat S = Mat::Zero(sz, p.W[l].cols());
      S.leftCols(sz) = seg.asDiagonal();
      out.W.push_back(sp.left[l] * S * sp.right[l].transpose());
    } else {
      out.W.push_back(sp.left[l] * seg.asDiagonal() * sp.left[l].transpose());
    }
  }
  return out;
}

bool in_C_polar(const ReducedStructure& rs, const ReducedPoint& p, double tol) {
  return norm(project_C(rs, p)) <= tol;
}

}  // namespace kyfan
