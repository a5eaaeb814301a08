#include "kyfan/kkt_system.hpp"

#include <cmath>

namespace kyfan {

Vec to_vec(const ConePoint& x) {
  Vec v(1 + x.X.size());
  v(0) = x.t;
  v.tail(x.X.size()) = Eigen::Map<const Vec>(x.X.data(), x.X.size());
  return v;
}

ConePoint from_vec(const Vec& v, Index m, Index n) {
  require(v.size() == 1 + m * n, "from_vec: size mismatch");
  return {v(0), Eigen::Map<const Mat>(v.data() + 1, m, n)};
}

void NlsInstance::validate() const {
  require(m >= 1 && n >= m, "NLS instance needs 1 <= m <= n");
  require(A.cols() == m * n, "A must have m*n columns");
  require(b.size() == A.rows(), "b must have one entry per row of A");
  require(rho > 0, "rho must be positive");
  require(E.cols() == m * n || E.rows() == 0, "E must have m*n columns");
  require(d.size() == E.rows(), "d must have one entry per row of E");
  require(A.allFinite() && b.allFinite() && E.allFinite() && d.allFinite() && std::isfinite(rho),
          "NLS data must be finite");
}

ProblemInstance NlsInstance::to_problem() const {
  validate();
  ProblemInstance p;
  p.m = m;
  p.n = n;
  p.p = E.rows();
  p.k = static_cast<int>(m);
  p.tag = "nls";
  const Mat A_ = A, E_ = E.rows() ? E : Mat(Mat::Zero(0, m * n));
  const Vec b_ = b, d_ = d;
  const double rho_ = rho;
  const Index m_ = m, n_ = n;
  auto vecX = [](const ConePoint& x) { return Vec(Eigen::Map<const Vec>(x.X.data(), x.X.size())); };
  auto matX = [m_, n_](const Vec& v) { return Mat(Eigen::Map<const Mat>(v.data(), m_, n_)); };

  p.f = [=](const ConePoint& x) { return 0.5 * (A_ * vecX(x) - b_).squaredNorm() + rho_ * x.t; };
  p.grad_f = [=](const ConePoint& x) {
    return ConePoint{rho_, matX(A_.transpose() * (A_ * vecX(x) - b_))};
  };
  p.hess_f = [=](const ConePoint&, const ConePoint& d) {
    return ConePoint{0.0, matX(A_.transpose() * (A_ * vecX(d)))};
  };
  p.h = [=](const ConePoint& x) { return Vec(E_ * vecX(x) - d_); };
  p.h_jac = [=](const ConePoint&, const ConePoint& d) { return Vec(E_ * vecX(d)); };
  p.h_adj = [=](const ConePoint&, const Vec& l) { return ConePoint{0.0, matX(E_.transpose() * l)}; };
  p.h_hess = [=](const ConePoint&, const Vec&, const ConePoint&) { return ConePoint::zero(m_, n_); };
  p.G = [](const ConePoint& x) { return x; };
  p.G_jac = [](const ConePoint&, const ConePoint& d) { return d; };
  p.G_adj = [](const ConePoint&, const ConePoint& y) { return y; };
  p.G_hess = [=](const ConePoint&, const ConePoint&, const ConePoint&) { return ConePoint::zero(m_, n_); };
  return p;
}

Perturbation Perturbation::zero(const ProblemInstance& inst) {
  return {ConePoint::zero(inst.m, inst.n), Vec::Zero(inst.p), ConePoint::zero(inst.m, inst.n)};
}

double Perturbation::norm() const {
  const double a = kyfan::norm(df), b = dh.norm(), c = kyfan::norm(dG);
  return std::sqrt(a * a + b * b + c * c);
}

double Residual::norm() const {
  const double a = kyfan::norm(r1), b = r2.norm(), c = kyfan::norm(r3);
  return std::sqrt(a * a + b * b + c * c);
}

ConePoint lagrangian_grad(const ProblemInstance& inst, const KktTriple& z) {
  ConePoint g = inst.grad_f(z.X) + inst.G_adj(z.X, z.Y);
  if (inst.p) g = g + inst.h_adj(z.X, z.lambda);
  return g;
}

ConePoint lagrangian_hess(const ProblemInstance& inst, const KktTriple& z, const ConePoint& d) {
  ConePoint r = inst.hess_f(z.X, d) + inst.G_hess(z.X, z.Y, d);
  if (inst.p) r = r + inst.h_hess(z.X, z.lambda, d);
  return r;
}

Residual psi_tilde_residual(const ProblemInstance& inst, const Perturbation& delta,
                            const KktTriple& z) {
  Residual r;
  r.r1 = lagrangian_grad(inst, z) - delta.df;
  r.r2 = inst.p ? Vec(inst.h(z.X) - delta.dh) : Vec(0);
  const ConePoint g = inst.G(z.X) - delta.dG;
  r.r3 = g - project_K(g + z.Y, inst.k).onto_K;
  return r;
}

Residual psi_residual(const ProblemInstance& inst, const KktTriple& z) {
  return psi_tilde_residual(inst, Perturbation::zero(inst), z);
}

namespace {

Residual psi_tilde_dirderiv_at(const ProblemInstance& inst, const PointContext& ctx,
                               const KktTriple& z, const KktDirection& dir) {
  Residual r;
  r.r1 = lagrangian_hess(inst, z, dir.dX) + inst.G_adj(z.X, dir.dY) - dir.dd.df;
  if (inst.p) r.r1 = r.r1 + inst.h_adj(z.X, dir.dlambda);
  r.r2 = inst.p ? Vec(inst.h_jac(z.X, dir.dX) - dir.dd.dh) : Vec(0);
  const ConePoint gd = inst.G_jac(z.X, dir.dX) - dir.dd.dG;
  r.r3 = gd - pi_K_dirderiv(ctx, gd + dir.dY);
  return r;
}

Vec flatten(const Residual& r) {
  const Vec a = to_vec(r.r1), c = to_vec(r.r3);
  Vec v(a.size() + r.r2.size() + c.size());
  v << a, r.r2, c;
  return v;
}

Mat null_space(const Mat& M, Index cols) {
  if (M.rows() == 0) return Mat::Identity(cols, cols);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double cut = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

Vec random_unit(Rng& rng, Index n) {
  std::normal_distribution<double> g;
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = g(rng);
  return v / v.norm();
}

}  // namespace

Residual psi_tilde_dirderiv(const ProblemInstance& inst, const Perturbation& delta,
                            const KktTriple& z, const KktDirection& dir) {
  const PointContext ctx = make_context(inst.G(z.X) - delta.dG + z.Y, inst.k);
  return psi_tilde_dirderiv_at(inst, ctx, z, dir);
}

DecomReport decom_check(const ConePoint& g, const ConePoint& y, int k, double tol) {
  DecomReport r;
  const double s = std::max(1.0, norm(g) + norm(y));
  r.complementarity = in_K(g, k, tol * s) && in_Kpolar(y, k, tol * s) &&
                      std::abs(inner(g, y)) <= tol * s * s;
  r.projection = norm(g - project_K(g + y, k).onto_K) <= tol * s;
  return r;
}

bool problem_critical_cone_member(const ProblemInstance& inst, const ConePoint& xbar,
                                  const ConePoint& dir, double tol) {
  const double s = std::max(1.0, norm(dir));
  if (inst.p && inst.h_jac(xbar, dir).norm() > tol * s) return false;
  if (std::abs(inner(inst.grad_f(xbar), dir)) > tol * s) return false;
  const PointContext ctx = make_context(inst.G(xbar), inst.k);
  return in_tangent_K(ctx, inst.G_jac(xbar, dir), tol);
}

Mat dense_h_jac(const ProblemInstance& inst, const ConePoint& x) {
  const Index N = 1 + inst.m * inst.n;
  Mat J(inst.p, N);
  for (Index j = 0; j < N && inst.p; ++j)
    J.col(j) = inst.h_jac(x, from_vec(Vec::Unit(N, j), inst.m, inst.n));
  return J;
}

Mat dense_G_jac(const ProblemInstance& inst, const ConePoint& x) {
  const Index N = 1 + inst.m * inst.n;
  Mat J(N, N);
  for (Index j = 0; j < N; ++j)
    J.col(j) = to_vec(inst.G_jac(x, from_vec(Vec::Unit(N, j), inst.m, inst.n)));
  return J;
}

SoscReport sosc_check(const ProblemInstance& inst, const ConePoint& xbar,
                      const std::vector<Multiplier>& multipliers, int n_samples, double tol,
                      std::uint64_t seed) {
  require(!multipliers.empty(), "sosc_check needs at least one multiplier");
  const Index m = inst.m, n = inst.n, N = 1 + m * n;
  const ConePoint gx = inst.G(xbar);
  std::vector<PointContext> ctxs;
  for (const Multiplier& mu : multipliers) ctxs.push_back(make_context(gx + mu.Y, inst.k));

  // Critical directions are z in ker h' with G'z in C_K; sample them by
  // Dykstra's method on the lifted pairs (z, G'z).
  const Mat GJ = dense_G_jac(inst, xbar);
  const Mat B = null_space(dense_h_jac(inst, xbar), N);
  Mat lifted(2 * N, B.cols());
  lifted << B, GJ * B;
  const Mat Q = lifted.cols() ? Mat(Eigen::HouseholderQR<Mat>(lifted).householderQ() *
                                    Mat::Identity(2 * N, lifted.cols()))
                              : Mat(2 * N, 0);
  auto proj_L = [&](const Vec& v) { return Vec(Q * (Q.transpose() * v)); };
  auto proj_cone = [&](const Vec& v) {
    Vec out = v;
    out.tail(N) = to_vec(project_critical_cone(ctxs[0], from_vec(v.tail(N), m, n)));
    return out;
  };

  SoscReport rep;
  Rng rng(seed);
  for (int s = 0; s < n_samples && Q.cols(); ++s) {
    Vec x = random_unit(rng, 2 * N), p = Vec::Zero(2 * N), q = Vec::Zero(2 * N), y;
    for (int it = 0; it < 300; ++it) {
      y = proj_L(x + p);
      p = x + p - y;
      const Vec xn = proj_cone(y + q);
      q = y + q - xn;
      x = xn;
    }
    y = proj_L(x);
    const double yn = y.norm();
    if (yn < 1e-8) continue;
    if ((y - proj_cone(y)).norm() > 1e-8 * yn) continue;
    const Vec zv = y.head(N);
    if (zv.norm() < 1e-8 * yn) continue;
    const ConePoint z = from_vec(zv / zv.norm(), m, n);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < multipliers.size(); ++i) {
      const KktTriple trip{xbar, multipliers[i].lambda, multipliers[i].Y};
      const double v = inner(z, lagrangian_hess(inst, trip, z)) -
                       upsilon(ctxs[i], inst.G_jac(xbar, z));
      best = std::max(best, v);
    }
    ++rep.n_samples;
    if (best < rep.min_value) {
      rep.min_value = best;
      rep.witness = z;
    }
  }
  if (rep.n_samples == 0) {
    rep.holds = true;
    rep.verdict = "holds (vacuous)";
  } else {
    rep.holds = rep.min_value > tol;
    rep.verdict = rep.holds ? "holds (sampled)" : "violated";
  }
  return rep;
}

SrcqReport srcq_check(const ProblemInstance& inst, const ConePoint& xbar,
                      const Multiplier& multiplier, int n_starts, double tol,
                      std::uint64_t seed) {
  const Index m = inst.m, n = inst.n, N = 1 + m * n, p = inst.p;
  const PointContext ctx = make_context(inst.G(xbar) + multiplier.Y, inst.k);
  Mat M(N, p + N);
  M << dense_h_jac(inst, xbar).transpose(), dense_G_jac(inst, xbar).transpose();
  const Mat Nb = null_space(M, p + N);

  SrcqReport rep;
  rep.verdict = "holds (no certificate found)";
  rep.holds = true;
  if (Nb.cols() == 0) return rep;
  Rng rng(seed);
  for (int s = 0; s < n_starts; ++s) {
    Vec z = random_unit(rng, p + N);
    for (int it = 0; it < 2000; ++it) {
      z = Nb * (Nb.transpose() * z);
      const double zn = z.norm();
      if (zn < 1e-14) break;
      z /= zn;
      const ConePoint Y = from_vec(z.tail(N), m, n);
      const ConePoint PY = project_critical_cone(ctx, Y);
      const double r = norm(PY);
      if (r < rep.min_residual) rep.min_residual = r;
      if (r <= tol) {
        rep.holds = false;
        rep.verdict = "fails";
        rep.certificate = Multiplier{z.head(p), Y};
        return rep;
      }
      z.tail(N) = to_vec(Y - PY);
    }
  }
  return rep;
}

ProbeReport kkt_isolated_calmness_probe(const ProblemInstance& inst, const KktTriple& z,
                                        int n_starts, double tol, std::uint64_t seed) {
  const Index m = inst.m, n = inst.n, N = 1 + m * n, p = inst.p, D = 2 * N + p;
  const PointContext ctx = make_context(inst.G(z.X) + z.Y, inst.k);
  const Perturbation zero = Perturbation::zero(inst);
  auto unpack = [&](const Vec& v) {
    return KktDirection{zero, from_vec(v.head(N), m, n), v.segment(N, p), from_vec(v.tail(N), m, n)};
  };
  auto F = [&](const Vec& v) { return flatten(psi_tilde_dirderiv_at(inst, ctx, z, unpack(v))); };

  ProbeReport rep;
  rep.verdict = "only-zero (sampled)";
  Rng rng(seed);
  const double eps = 1e-7;
  for (int s = 0; s < n_starts; ++s) {
    Vec v = random_unit(rng, D);
    for (int it = 0; it < 20; ++it) {
      // Jacobian of the linear piece containing v.
      const Vec f0 = F(v);
      Mat J(f0.size(), D);
      for (Index j = 0; j < D; ++j) J.col(j) = (F(v + eps * Vec::Unit(D, j)) - f0) / eps;
      Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeFullV);
      Vec w = svd.matrixV().col(D - 1);
      if (w.dot(v) < 0) w = -w;
      const double r = F(w).norm();
      if (r < rep.min_norm) rep.min_norm = r;
      if (r <= tol) {
        rep.only_zero = false;
        rep.verdict = "witness";
        rep.witness = unpack(w);
        return rep;
      }
      if ((w - v).norm() < 1e-12) break;
      v = w;
    }
  }
  return rep;
}

NlsInstance scalar_nls_fixture() {
  NlsInstance s;
  s.m = s.n = 1;
  s.A = Mat::Constant(1, 1, 1.0);
  s.b = Vec::Constant(1, 3.0);
  s.rho = 1.0;
  s.E = Mat(0, 1);
  s.d = Vec(0);
  return s;
}

}  // namespace kyfan
