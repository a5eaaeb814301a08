#include "kyfan/cone_core.hpp"

#include <algorithm>
#include <cmath>

#include "kyfan/topk_kernel.hpp"

namespace kyfan {

const char* to_string(ProjCase c) {
  switch (c) {
    case ProjCase::interior_K: return "interior_K";
    case ProjCase::interior_Kpolar: return "interior_Kpolar";
    case ProjCase::boundary_pos: return "boundary_pos";
    case ProjCase::boundary_zero: return "boundary_zero";
  }
  return "?";
}

double kyfan_norm(const Vec& x, int k) {
  require(k >= 1 && k <= x.size(), "kyfan_norm: k out of range");
  return topk_abs(x, k);
}

namespace {

void check_point(const ConePoint& p, int k) {
  require(all_finite(p), "non-finite cone point");
  require(p.rows() <= p.cols(), "expected m <= n");
  require(k >= 1 && k <= p.rows(), "k out of range");
}

}  // namespace

bool in_K(const ConePoint& p, int k, double tol) {
  check_point(p, k);
  Eigen::JacobiSVD<Mat> svd(p.X);
  return kyfan_norm(svd.singularValues(), k) <= p.t + tol;
}

bool in_Kpolar(const ConePoint& p, int k, double tol) {
  check_point(p, k);
  Eigen::JacobiSVD<Mat> svd(p.X);
  const Vec& s = svd.singularValues();
  const double dual = std::max(s.size() ? s(0) : 0.0, s.sum() / k);
  return p.t <= tol && dual <= -p.t + tol;
}

ProjectionResult project_K(const ConePoint& p, int k, double tol) {
  check_point(p, k);
  const Index m = p.rows(), n = p.cols();
  ProjectionResult r;
  r.k = k;
  r.frame = svd_frame(p.X);
  const SvdFrame& f = r.frame;
  const Vec& s = f.sigma;
  const double s1 = m ? s(0) : 0.0;
  const double scale = std::max(std::abs(p.t), s1);
  const double bt = tol * scale;

  const double gap = p.t - kyfan_norm(s, k);
  const double pgap = -p.t - std::max(s1, s.sum() / k);

  double theta = 0.0;
  Vec sbar = s;
  r.kase = ProjCase::boundary_pos;  // refined below
  if (gap > bt) {
    r.kase = ProjCase::interior_K;
  } else if (pgap > bt) {
    r.kase = ProjCase::interior_Kpolar;
    theta = -p.t;
    sbar.setZero();
  } else if (gap >= -bt) {
    r.on_bdK = true;
  } else if (pgap >= -bt) {
    theta = -p.t;
    sbar.setZero();
  } else {
    EpiResult e = project_epi_topk(p.t, Vec(0), s, k, true);
    theta = e.theta;
    sbar = e.d_beta.cwiseMax(0.0);
  }
  r.theta = theta;

  if (r.kase == ProjCase::interior_K || r.kase == ProjCase::interior_Kpolar) {
    r.sigma_bar = sbar;
    r.u_bar = theta > 0 ? Vec((s - sbar) / theta) : Vec(Vec::Zero(m));
    r.k0 = 0;
    r.k1 = static_cast<int>(m);
    if (r.kase == ProjCase::interior_K) {
      r.onto_K = p;
      r.onto_Kpolar = ConePoint::zero(m, n);
    } else {
      r.onto_K = ConePoint::zero(m, n);
      r.onto_Kpolar = p;
    }
    return r;
  }

  // Boundary: classify the groups of X into alpha / beta / gamma.
  const double zt = 1e-10 * scale;
  const double vk = sbar(k - 1);
  const bool pos_case = vk > zt;
  r.kase = pos_case ? ProjCase::boundary_pos : ProjCase::boundary_zero;
  // Class boundaries compare projected values, which the kernel returns to
  // rounding accuracy, so this is much tighter than the frame's group_tol.
  const double gt = 1e-11 * scale;

  r.group_class.resize(f.groups.size());
  r.u_bar = Vec::Zero(m);
  int na = 0, nbeta = 0;
  for (std::size_t l = 0; l < f.groups.size(); ++l) {
    const IndexList& g = f.groups[l];
    double rep = 0.0, urep = 0.0;
    for (int i : g) {
      rep += sbar(i);
      urep += s(i) - sbar(i);
    }
    rep /= static_cast<double>(g.size());
    urep /= static_cast<double>(g.size());
    GroupClass gc;
    if (pos_case)
      gc = rep > vk + gt ? GroupClass::alpha
                         : (rep >= vk - gt ? GroupClass::beta : GroupClass::gamma);
    else
      gc = rep > zt ? GroupClass::alpha : GroupClass::beta;
    r.group_class[l] = gc;
    const double ub = theta > 0 ? std::clamp(urep / theta, 0.0, 1.0) : 0.0;
    for (int i : g) {
      if (gc == GroupClass::alpha) {
        sbar(i) = s(i) - theta;
        r.u_bar(i) = theta > 0 ? 1.0 : 0.0;
      } else if (gc == GroupClass::beta) {
        sbar(i) = pos_case ? vk : 0.0;
        r.u_bar(i) = ub;
      } else {
        sbar(i) = s(i);
        r.u_bar(i) = 0.0;
      }
    }
    if (gc == GroupClass::alpha) na += static_cast<int>(g.size());
    if (gc == GroupClass::beta) nbeta += static_cast<int>(g.size());
  }
  r.k0 = na;
  r.k1 = pos_case ? na + nbeta : static_cast<int>(m);
  if (theta > 0) {
    for (std::size_t l = 0; l < f.groups.size(); ++l) {
      if (r.group_class[l] != GroupClass::beta) continue;
      for (int i : f.groups[l]) {
        const double u = r.u_bar(i);
        if (u >= 1.0 - 1e-9) r.beta1.push_back(i);
        else if (u <= 1e-9) r.beta3.push_back(i);
        else r.beta2.push_back(i);
      }
    }
  }
  r.sigma_bar = sbar;
  r.onto_K = ConePoint(p.t + theta, f.compose(sbar));
  r.onto_Kpolar = ConePoint(-theta, f.compose(s - sbar));
  if (r.on_bdK) r.onto_K.t = p.t;
  return r;
}

ProjectionResult project_Kpolar(const ConePoint& p, int k, double tol) {
  return project_K(p, k, tol);
}

}  // namespace kyfan
