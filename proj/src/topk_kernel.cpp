#include "kyfan/topk_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace kyfan {

namespace {

std::vector<int> order_desc(const Vec& key) {
  std::vector<int> idx(key.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return key(a) > key(b); });
  return idx;
}

double pos(double x) { return x > 0 ? x : 0.0; }

double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

double topk_sum(const Vec& z, int j) {
  require(j >= 0 && j <= z.size(), "topk_sum: j out of range");
  std::vector<double> v(z.data(), z.data() + z.size());
  std::sort(v.begin(), v.end(), std::greater<>());
  return std::accumulate(v.begin(), v.begin() + j, 0.0);
}

double topk_abs(const Vec& z, int j) {
  return topk_sum(z.cwiseAbs(), std::min<int>(j, static_cast<int>(z.size())));
}

EpiResult project_epi_topk(double zeta, const Vec& ka, const Vec& kb, int j, bool abs_mode) {
  const int na = static_cast<int>(ka.size());
  const int n = static_cast<int>(kb.size());
  require(j >= 1, "project_epi_topk: j must be positive");
  require(abs_mode || j <= n, "project_epi_topk: j exceeds block size");
  j = std::min(j, n);

  EpiResult res;
  const double A = ka.sum();
  const double g = abs_mode ? topk_abs(kb, j) : topk_sum(kb, j);
  if (A + g <= zeta) {
    res.eta = zeta;
    res.d_alpha = ka;
    res.d_beta = kb;
    res.u_beta = Vec::Zero(n);
    res.p0 = n;
    return res;
  }
  if (n == 0) {
    // Only the half-space sum(da) <= eta remains.
    double th = (A - zeta) / (1.0 + na);
    res.theta = th;
    res.eta = zeta + th;
    res.d_alpha = ka.array() - th;
    res.d_beta = kb;
    res.u_beta = Vec::Zero(0);
    return res;
  }

  const Vec key = abs_mode ? Vec(kb.cwiseAbs()) : kb;
  const std::vector<int> ord = order_desc(key);
  Vec y(n);
  for (int i = 0; i < n; ++i) y(i) = key(ord[i]);
  Vec S = Vec::Zero(n + 1);
  for (int i = 0; i < n; ++i) S(i + 1) = S(i) + y(i);

  // Pattern: kind 0 band (p0, p1), kind 1 no band, kind 2 zero tail.
  struct Cand {
    int kind, p0, p1;
    double theta, v, viol;
  };
  Cand best{-1, 0, 0, 0, 0, std::numeric_limits<double>::infinity()};
  auto consider = [&](const Cand& c) {
    if (c.viol < best.viol) best = c;
  };

  for (int p0 = 0; p0 < j; ++p0) {
    for (int p1 = j; p1 <= n; ++p1) {
      const double nB = p1 - p0, w = j - p0, SB = S(p1) - S(p0);
      const double th = (A + S(p0) + w * SB / nB - zeta) / (1.0 + na + p0 + w * w / nB);
      const double v = (SB - w * th) / nB;
      double viol = pos(-th);
      viol = std::max(viol, pos(y(p0) - (v + th)));
      viol = std::max(viol, pos(v - y(p1 - 1)));
      if (p0 > 0) viol = std::max(viol, pos(v - (y(p0 - 1) - th)));
      if (p1 < n) viol = std::max(viol, pos(y(p1) - v));
      if (abs_mode) viol = std::max(viol, pos(-v));
      consider({0, p0, p1, th, v, viol});
    }
  }
  {
    const double th = (A + S(j) - zeta) / (1.0 + na + j);
    double viol = pos(-th);
    if (j < n) viol = std::max(viol, pos(y(j) - (y(j - 1) - th)));
    if (abs_mode) viol = std::max(viol, pos(th - y(j - 1)));
    consider({1, j, j, th, 0.0, viol});
  }
  if (abs_mode) {
    for (int p0 = 0; p0 < j; ++p0) {
      const double th = (A + S(p0) - zeta) / (1.0 + na + p0);
      double viol = pos(-th);
      if (p0 > 0) viol = std::max(viol, pos(th - y(p0 - 1)));
      if (p0 < n) viol = std::max(viol, pos(y(p0) - th));
      viol = std::max(viol, pos((S(n) - S(p0)) - (j - p0) * th));
      consider({2, p0, p0, th, 0.0, viol});
    }
  }

  const double th = best.theta;
  Vec ys(n), us(n);
  for (int i = 0; i < n; ++i) {
    if (i < best.p0) {
      ys(i) = y(i) - th;
      us(i) = 1.0;
    } else if (best.kind == 0 && i < best.p1) {
      ys(i) = best.v;
      us(i) = th > 0 ? (y(i) - best.v) / th : 0.0;
    } else if (best.kind == 2) {
      ys(i) = 0.0;
      us(i) = th > 0 ? y(i) / th : 0.0;
    } else {
      ys(i) = y(i);
      us(i) = 0.0;
    }
  }
  res.d_beta = Vec(n);
  res.u_beta = Vec(n);
  for (int i = 0; i < n; ++i) {
    const int o = ord[i];
    const double sgn = (abs_mode && kb(o) < 0) ? -1.0 : 1.0;
    res.d_beta(o) = sgn * ys(i);
    res.u_beta(o) = sgn * us(i);
  }
  res.theta = th;
  res.eta = zeta + th;
  res.d_alpha = ka.array() - th;
  res.p0 = best.p0;
  res.violation = best.viol;
  return res;
}

FaceResult project_face_topk(double zeta, const Vec& ka, const Vec& kb, const Vec& u,
                             const std::vector<int>& cls, bool abs_mode, bool full_sum) {
  const int na = static_cast<int>(ka.size());
  const int nb = static_cast<int>(kb.size());
  const int N = na + nb;
  require(static_cast<int>(u.size()) == nb && static_cast<int>(cls.size()) == nb,
          "project_face_topk: size mismatch");

  Vec kappa(N), e(N);
  kappa << ka, kb;
  e << Vec::Ones(na), u;

  std::vector<int> up, mid, low;
  for (int i = 0; i < nb; ++i) {
    if (cls[i] == 1) up.push_back(na + i);
    else if (cls[i] == 2) mid.push_back(na + i);
    else low.push_back(na + i);
  }
  // UP entries are clamped smallest first, LOW entries largest first.
  std::stable_sort(up.begin(), up.end(), [&](int a, int b) { return kappa(a) < kappa(b); });
  auto low_key = [&](int i) { return abs_mode ? std::abs(kappa(i)) : kappa(i); };
  std::stable_sort(low.begin(), low.end(), [&](int a, int b) { return low_key(a) > low_key(b); });
  auto sgn = [&](int i) { return (abs_mode && kappa(i) < 0) ? -1.0 : 1.0; };

  const double scale = std::max({1.0, std::abs(zeta), max_abs(kappa)});
  const double eps = 1e-11 * scale;

  // 0: tau free, 1: tau = 0 held by tau >= 0, 2: tau = 0 fixed.
  std::vector<int> modes;
  if (!abs_mode) modes = {0};
  else if (full_sum) modes = {0, 1};
  else modes = {2};

  FaceResult best;
  double best_obj = std::numeric_limits<double>::infinity();
  double best_viol = std::numeric_limits<double>::infinity();
  bool have_feasible = false;

  const int nup = static_cast<int>(up.size()), nlow = static_cast<int>(low.size());
  for (int mode : modes) {
    for (int p1 = 0; p1 <= nup; ++p1) {
      for (int p3 = (mode == 0 ? 0 : nlow); p3 <= nlow; ++p3) {
        // role: -1 own variable, -2 tied to tau with coefficient coef, -3 zero
        std::vector<int> role(N, -1);
        std::vector<double> coef(N, 0.0);
        std::vector<char> clamped(N, 0);
        for (int q = 0; q < p1; ++q) {
          role[up[q]] = (mode == 0) ? -2 : -3;
          coef[up[q]] = 1.0;
          clamped[up[q]] = 1;
        }
        for (int i : mid) {
          role[i] = (mode == 0) ? -2 : -3;
          coef[i] = 1.0;
        }
        if (mode == 0) {
          for (int q = 0; q < p3; ++q) {
            role[low[q]] = -2;
            coef[low[q]] = sgn(low[q]);
            clamped[low[q]] = 1;
          }
        } else {
          for (int i : low) role[i] = -3;
        }

        std::vector<int> var(N, -1);
        int nv = 0;
        bool has_tau = false;
        for (int i = 0; i < N; ++i) {
          if (role[i] == -1) var[i] = nv++;
          if (role[i] == -2) has_tau = true;
        }
        const int itau = has_tau ? nv++ : -1;
        Mat M = Mat::Zero(N, nv);
        for (int i = 0; i < N; ++i) {
          if (role[i] == -1) M(i, var[i]) = 1.0;
          else if (role[i] == -2) M(i, itau) = coef[i];
        }
        Vec d = Vec::Zero(N);
        if (nv > 0) {
          const Vec c = M.transpose() * e;
          const Mat H = M.transpose() * M + c * c.transpose();
          const Vec rhs = M.transpose() * kappa + zeta * c;
          const Vec z = H.ldlt().solve(rhs);
          d = M * z;
        }
        const double eta = e.dot(d);
        const Vec g = (eta - zeta) * e + (d - kappa);

        double viol = 0.0;
        const bool tau_known = has_tau || mode != 0;
        double tau = 0.0;
        if (has_tau) {
          for (int i = 0; i < N; ++i)
            if (role[i] == -2) {
              tau = d(i) * coef[i];
              break;
            }
        }
        if (tau_known) {
          for (int i : up)
            if (!clamped[i]) viol = std::max(viol, pos(tau - d(i)));
          if (mode == 0)
            for (int i : low)
              if (!clamped[i]) viol = std::max(viol, pos((abs_mode ? std::abs(d(i)) : d(i)) - tau));
          if (abs_mode && mode == 0) viol = std::max(viol, pos(-tau));
        } else {
          double lo = abs_mode ? 0.0 : -std::numeric_limits<double>::infinity();
          for (int i : low) lo = std::max(lo, abs_mode ? std::abs(d(i)) : d(i));
          double hi = std::numeric_limits<double>::infinity();
          for (int i : up) hi = std::min(hi, d(i));
          if (std::isfinite(lo) && std::isfinite(hi)) viol = std::max(viol, pos(lo - hi));
        }
        for (int i : up)
          if (clamped[i]) viol = std::max(viol, pos(-g(i)));
        if (mode == 0)
          for (int i : low)
            if (clamped[i]) viol = std::max(viol, pos(sgn(i) * g(i)));
        if (mode == 1) {
          double mu = 0.0;
          for (int i : up)
            if (clamped[i]) mu += g(i);
          for (int i : mid) mu += g(i);
          for (int i : low) mu -= std::abs(g(i));
          viol = std::max(viol, pos(-mu));
        }

        const double obj = 0.5 * (eta - zeta) * (eta - zeta) + 0.5 * (d - kappa).squaredNorm();
        const bool feas = viol <= eps;
        bool take = false;
        if (feas) {
          take = !have_feasible || obj < best_obj;
          if (take) have_feasible = true;
        } else if (!have_feasible) {
          take = viol < best_viol;
        }
        if (take) {
          best_obj = obj;
          best_viol = viol;
          best.eta = eta;
          best.d_alpha = d.head(na);
          best.d_beta = d.tail(nb);
          best.violation = viol;
        }
      }
    }
  }
  return best;
}

}  // namespace kyfan
