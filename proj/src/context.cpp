#include "kyfan/context.hpp"

#include <algorithm>

namespace kyfan {

PointContext make_context(const ConePoint& x, int k, double tol, double snap_tol) {
  PointContext c;
  c.k = k;
  c.point = x;
  c.proj = project_K(x, k, tol);
  const double scale = norm(x);
  if (c.proj.is_boundary() && !c.proj.on_bdK) {
    if (c.proj.theta <= snap_tol * scale) {
      c.point = c.proj.onto_K;
      c.snapped = true;
    } else if (norm(c.proj.onto_K) <= snap_tol * scale && norm(c.proj.onto_K) > 0) {
      c.point = c.proj.onto_Kpolar;
      c.snapped = true;
    }
    if (c.snapped) c.proj = project_K(c.point, k, std::max(tol, snap_tol));
  }

  const SvdFrame& f = c.frame();
  c.coeffs = hadamard_coeffs(f, c.proj.sigma_bar);
  if (!c.boundary()) return c;

  for (int g = 0; g < static_cast<int>(f.groups.size()); ++g) {
    if (f.has_b_group() && g == static_cast<int>(f.groups.size()) - 1) c.b_group = g;
    IndexList* rows = nullptr;
    switch (c.proj.group_class[g]) {
      case GroupClass::alpha:
        c.alpha_groups.push_back(g);
        rows = &c.alpha;
        break;
      case GroupClass::beta:
        c.beta_groups.push_back(g);
        rows = &c.beta;
        break;
      case GroupClass::gamma:
        c.gamma_groups.push_back(g);
        rows = &c.gamma;
        break;
    }
    rows->insert(rows->end(), f.groups[g].begin(), f.groups[g].end());
  }
  return c;
}

}  // namespace kyfan
