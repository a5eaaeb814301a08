#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace kyfan::oracle {

NnlsResult nnls(const Mat& A, const Vec& b, double tol) {
  const Index N = A.cols();
  NnlsResult res;
  Vec c = Vec::Zero(N);
  std::vector<char> passive(N, 0);
  const double scale = std::max(1.0, b.norm()) * std::max(1.0, A.norm());
  auto lstsq = [&](Vec& s) {
    std::vector<Index> idx;
    for (Index i = 0; i < N; ++i)
      if (passive[i]) idx.push_back(i);
    Mat AP(A.rows(), static_cast<Index>(idx.size()));
    for (std::size_t q = 0; q < idx.size(); ++q) AP.col(static_cast<Index>(q)) = A.col(idx[q]);
    const Vec sp = AP.colPivHouseholderQr().solve(b);
    s = Vec::Zero(N);
    for (std::size_t q = 0; q < idx.size(); ++q) s(idx[q]) = sp(static_cast<Index>(q));
  };

  for (int outer = 0; outer < 3 * N + 10; ++outer) {
    const Vec w = A.transpose() * (b - A * c);
    Index jmax = -1;
    double wmax = tol * scale;
    for (Index i = 0; i < N; ++i)
      if (!passive[i] && w(i) > wmax) {
        wmax = w(i);
        jmax = i;
      }
    if (jmax < 0) {
      res.converged = true;
      res.kkt = 0.0;
      for (Index i = 0; i < N; ++i)
        if (!passive[i]) res.kkt = std::max(res.kkt, w(i));
      break;
    }
    passive[jmax] = 1;
    for (int inner = 0; inner < 3 * N + 10; ++inner) {
      Vec s;
      lstsq(s);
      double alpha = 1.0;
      bool feasible = true;
      for (Index i = 0; i < N; ++i)
        if (passive[i] && s(i) <= 0) {
          feasible = false;
          alpha = std::min(alpha, c(i) / (c(i) - s(i)));
        }
      if (feasible) {
        c = s;
        break;
      }
      c += alpha * (s - c);
      for (Index i = 0; i < N; ++i)
        if (passive[i] && c(i) <= 1e-15) {
          passive[i] = 0;
          c(i) = 0.0;
        }
    }
  }
  res.c = c;
  return res;
}

ConeProjection project_by_polar_generators(const Mat& Gen, const Vec& x) {
  NnlsResult r = nnls(Gen, x);
  return {x - Gen * r.c, r.converged};
}

namespace {

/// All sign/support patterns with exactly j nonzero entries in a length-n
/// vector; entries are +1 only, or +-1 when signed.
std::vector<Vec> patterns(int n, int j, bool signed_entries) {
  std::vector<Vec> out;
  std::vector<int> sel(n, 0);
  std::fill(sel.end() - j, sel.end(), 1);
  do {
    std::vector<int> on;
    for (int i = 0; i < n; ++i)
      if (sel[i]) on.push_back(i);
    const int combos = signed_entries ? (1 << j) : 1;
    for (int mask = 0; mask < combos; ++mask) {
      Vec y = Vec::Zero(n);
      for (int q = 0; q < j; ++q) y(on[q]) = ((mask >> q) & 1) ? -1.0 : 1.0;
      out.push_back(y);
    }
  } while (std::next_permutation(sel.begin(), sel.end()));
  return out;
}

}  // namespace

VecProjection project_kyfan_epigraph(double t, const Vec& s, int k) {
  const int m = static_cast<int>(s.size());
  // Polar of {||d||_(k) <= eta} is generated by (-1, y), y with k entries +-1.
  std::vector<Vec> ys = patterns(m, k, true);
  Mat Gen(1 + m, static_cast<Index>(ys.size()));
  for (std::size_t q = 0; q < ys.size(); ++q) {
    Gen(0, static_cast<Index>(q)) = -1.0;
    Gen.block(1, static_cast<Index>(q), m, 1) = ys[q];
  }
  Vec x(1 + m);
  x << t, s;
  ConeProjection p = project_by_polar_generators(Gen, x);
  return {p.x(0), p.x.tail(m), p.converged};
}

BlockProjection project_topk_block(double zeta, const Vec& ka, const Vec& kb, int j,
                                   bool abs_mode, const Vec* u) {
  const Index na = ka.size(), nb = kb.size();
  const Index dim = 1 + na + nb;
  std::vector<Vec> ys = patterns(static_cast<int>(nb), std::min<int>(j, static_cast<int>(nb)),
                                 abs_mode);
  const Index extra = u ? 2 : 0;
  Mat Gen(dim, static_cast<Index>(ys.size()) + extra);
  for (std::size_t q = 0; q < ys.size(); ++q) {
    Vec g(dim);
    g << -1.0, Vec::Ones(na), ys[q];
    Gen.col(static_cast<Index>(q)) = g;
  }
  if (u) {
    // The equality constraint adds the line through its normal.
    Vec a(dim);
    a << -1.0, Vec::Ones(na), *u;
    Gen.col(Gen.cols() - 2) = a;
    Gen.col(Gen.cols() - 1) = -a;
  }
  Vec x(dim);
  x << zeta, ka, kb;
  ConeProjection p = project_by_polar_generators(Gen, x);
  return {p.x(0), p.x.segment(1, na), p.x.tail(nb), p.converged};
}

}  // namespace kyfan::oracle
