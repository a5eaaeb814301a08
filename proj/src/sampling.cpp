#include "kyfan/sampling.hpp"

#include <algorithm>
#include <functional>

namespace kyfan {

namespace {

double unif(Rng& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}
int unif_int(Rng& rng, int a, int b) {
  return std::uniform_int_distribution<int>(a, b)(rng);
}
bool coin(Rng& rng, double p) { return unif(rng, 0.0, 1.0) < p; }

/// count values in (lo, hi), nonincreasing, with occasional repeats
std::vector<double> tied_values(Rng& rng, int count, double lo, double hi, double p_tie) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) {
    if (!v.empty() && coin(rng, p_tie))
      v.push_back(v.back());
    else
      v.push_back(unif(rng, lo, hi));
  }
  std::sort(v.begin(), v.end(), std::greater<>());
  // Keep distinct values well separated so grouping is unambiguous.
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] != v[i - 1] && v[i - 1] - v[i] < 1e-3 * (hi - lo)) v[i] = v[i - 1];
  return v;
}

/// Nonincreasing weights in [0, 1] of length n summing to total, with exact
/// ones, a fractional block and exact zeros. Requires total <= n.
std::vector<double> weights_with_sum(Rng& rng, int n, double total, int min_ones = 0) {
  std::vector<double> u(n, 0.0);
  const int j = static_cast<int>(std::floor(total + 1e-12));
  const double frac = total - j;
  int n1 = unif_int(rng, std::min(min_ones, j), j);
  double R = total - n1;
  int room = n - n1;
  // The fractional block needs more than R slots so every weight stays < 1.
  int minf = static_cast<int>(std::floor(R + 1e-12)) + 1;
  if (R <= 1e-12 || room < minf) {
    n1 = j;
    R = frac;
    room = n - n1;
    minf = R > 1e-12 ? 1 : 0;
  }
  for (int i = 0; i < n1; ++i) u[i] = 1.0;
  if (R <= 1e-12) return u;
  const int nf = unif_int(rng, minf, room);
  std::vector<double> w(nf, R / nf);
  if (nf > 1 && coin(rng, 0.5)) {
    for (int attempt = 0; attempt < 20; ++attempt) {
      std::vector<double> x(nf);
      double sx = 0;
      for (double& xi : x) sx += (xi = unif(rng, 0.3, 1.0));
      for (double& xi : x) xi *= R / sx;
      if (*std::max_element(x.begin(), x.end()) < 0.95) {
        w = x;
        break;
      }
    }
  }
  std::sort(w.begin(), w.end(), std::greater<>());
  for (int i = 0; i < nf; ++i) u[n1 + i] = w[i];
  return u;
}

}  // namespace

Mat random_gaussian(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat A(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) A(i, j) = nd(rng);
  return A;
}

Mat random_orthogonal(Rng& rng, Index n) {
  Eigen::HouseholderQR<Mat> qr(random_gaussian(rng, n, n));
  Mat Q = qr.householderQ();
  const Mat R = qr.matrixQR();
  for (Index i = 0; i < n; ++i)
    if (R(i, i) < 0) Q.col(i) *= -1.0;
  return Q;
}

ConePoint random_direction(Rng& rng, Index m, Index n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  return {nd(rng), random_gaussian(rng, m, n)};
}

StructuredPoint structured_point(Rng& rng, Index m, Index n, int k, ProjCase kase,
                                 const StructureOptions& opt) {
  require(m >= 1 && m <= n, "structured_point: need 1 <= m <= n");
  require(k >= 1 && k <= m, "structured_point: k out of range");
  const int mi = static_cast<int>(m);
  StructuredPoint sp;
  sp.k = k;
  sp.kase = kase;
  const Mat U = random_orthogonal(rng, m);
  const Mat V = random_orthogonal(rng, n);
  auto compose = [&](const Vec& s) -> Mat {
    return U * s.asDiagonal() * V.leftCols(m).transpose();
  };

  if (kase == ProjCase::interior_K || kase == ProjCase::interior_Kpolar) {
    Vec s(m);
    std::vector<double> vals = tied_values(rng, mi, 0.1, 3.0, opt.p_tie);
    for (int i = 0; i < mi; ++i) s(i) = vals[i];
    sp.sigma = s;
    const Mat X = compose(s);
    if (kase == ProjCase::interior_K) {
      const double t = kyfan_norm(s, k) + unif(rng, 0.2, 2.0);
      sp.point = {t, X};
      sp.k_part = sp.point;
      sp.polar_part = ConePoint::zero(m, n);
      sp.sigma_bar = s;
      sp.u_bar = Vec::Zero(m);
    } else {
      const double t = -std::max(s(0), s.sum() / k) - unif(rng, 0.2, 2.0);
      sp.point = {t, X};
      sp.k_part = ConePoint::zero(m, n);
      sp.polar_part = sp.point;
      sp.theta = -t;
      sp.sigma_bar = Vec::Zero(m);
      sp.u_bar = s / sp.theta;
    }
    sp.k0 = 0;
    sp.k1 = mi;
    return sp;
  }

  const bool pos_case = kase == ProjCase::boundary_pos;
  const int k0 = unif_int(rng, 0, k - 1);
  const int k1 = pos_case ? unif_int(rng, k, mi) : mi;
  const int nbeta = k1 - k0, j = k - k0;
  const double theta = coin(rng, opt.p_on_bdK) ? 0.0 : unif(rng, 0.2, 2.0);
  const double v = pos_case ? unif(rng, 0.5, 2.0) : 0.0;

  Vec sbar = Vec::Zero(m), ubar = Vec::Zero(m);
  std::vector<double> av = tied_values(rng, k0, v + 0.3, v + 3.0, opt.p_tie);
  for (int i = 0; i < k0; ++i) {
    sbar(i) = av[i];
    ubar(i) = 1.0;
  }
  std::vector<double> ub;
  // With Xbar = 0 the point only sits on bd K° when u_1 = 1 or sum(u) = k.
  if (pos_case || (k0 == 0 && j == 1) || coin(rng, opt.p_full_sum)) {
    ub = weights_with_sum(rng, nbeta, j);
  } else {
    const double lo = k0 == 0 ? 1.0 : 0.0;
    const double total = unif(rng, lo, j - 0.2);
    ub = weights_with_sum(rng, nbeta, total, k0 == 0 ? 1 : 0);
  }
  for (int i = 0; i < nbeta; ++i) {
    sbar(k0 + i) = v;
    ubar(k0 + i) = ub[i];
  }
  if (pos_case) {
    std::vector<double> gv = tied_values(rng, mi - k1, 0.05 * v, 0.9 * v, opt.p_tie);
    const bool zeros = coin(rng, 0.3);
    for (int i = 0; i < mi - k1; ++i)
      sbar(k1 + i) = (zeros && i >= (mi - k1) / 2) ? 0.0 : gv[i];
  }
  if (theta == 0.0) ubar.setZero();
  const Vec s = sbar + theta * ubar;

  double tbar = sbar.head(k0).sum() + j * v;
  sp.theta = theta;
  sp.sigma = s;
  sp.sigma_bar = sbar;
  sp.u_bar = ubar;
  sp.k0 = k0;
  sp.k1 = k1;
  sp.k_part = {tbar, compose(sbar)};
  sp.polar_part = {-theta, compose(theta * ubar)};
  sp.point = sp.k_part + sp.polar_part;
  return sp;
}

}  // namespace kyfan
