#include <doctest.h>

#include "kyfan/sampling.hpp"
#include "kyfan/tangent_critical.hpp"

using namespace kyfan;

namespace {

ProjCase random_case(Rng& rng, bool boundary_only) {
  const int lo = boundary_only ? 2 : 0;
  switch (std::uniform_int_distribution<int>(lo, 3)(rng)) {
    case 0: return ProjCase::interior_K;
    case 1: return ProjCase::interior_Kpolar;
    case 2: return ProjCase::boundary_pos;
    default: return ProjCase::boundary_zero;
  }
}

struct Setup {
  StructuredPoint sp;
  PointContext ctx;
};

Setup random_setup(Rng& rng, bool boundary_only) {
  const Index m = std::uniform_int_distribution<int>(1, 4)(rng);
  const Index n = m + std::uniform_int_distribution<int>(0, 2)(rng);
  const int k = std::uniform_int_distribution<int>(1, static_cast<int>(m))(rng);
  StructuredPoint sp = structured_point(rng, m, n, k, random_case(rng, boundary_only));
  PointContext ctx = make_context(sp.point, k);
  return {sp, ctx};
}

// dist(base + s dir, K) / s
double secant_gap(const ConePoint& base, const ConePoint& dir, int k, double s) {
  const ConePoint y = base + s * dir;
  return norm(y - project_K(y, k).onto_K) / s;
}

bool definitional(const PointContext& ctx, const ConePoint& dir, double tol) {
  const ConePoint polar = ctx.proj.onto_Kpolar;
  return in_tangent_K(ctx, dir, tol) &&
         std::abs(inner(dir, polar)) <= tol * std::max(1.0, norm(dir) * norm(polar));
}

}  // namespace

TEST_CASE("tangent cone examples") {
  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    Setup s = random_setup(rng, true);
    const Index m = s.ctx.m(), n = s.ctx.n();
    CHECK(in_tangent_K(s.ctx, {1.0, Mat::Zero(m, n)}, 1e-10));
    CHECK(in_tangent_K(s.ctx, -1.0 * s.ctx.proj.onto_K, 1e-10));
    CHECK(in_tangent_K(s.ctx, s.ctx.proj.onto_K, 1e-10));
  }
}

TEST_CASE("tangent cone against the secant oracle") {
  Rng rng(32);
  int in = 0, out = 0;
  for (int trial = 0; trial < 400; ++trial) {
    Setup s = random_setup(rng, trial % 5 != 0);
    ConePoint d = random_direction(rng, s.ctx.m(), s.ctx.n());
    d = (1.0 / norm(d)) * d;
    if (trial % 2) d = d + ConePoint{std::abs(d.t) + 2.0 * norm(d), Mat::Zero(s.ctx.m(), s.ctx.n())};
    const ConePoint base = s.ctx.proj.onto_K;
    const double g4 = secant_gap(base, d, s.ctx.k, 1e-4), g6 = secant_gap(base, d, s.ctx.k, 1e-6);
    const bool mine = in_tangent_K(s.ctx, d, 1e-9);
    if (g6 < 1e-4 && g4 < 1e-2) {
      CHECK(mine);
      ++in;
    } else if (g6 > 1e-3) {
      CHECK_FALSE(mine);
      ++out;
    }
  }
  CHECK(in > 100);
  CHECK(out > 100);
}

TEST_CASE("critical cone projection is a projection onto the definitional set") {
  Rng rng(33);
  for (int trial = 0; trial < 500; ++trial) {
    Setup s = random_setup(rng, trial % 5 != 0);
    const Index m = s.ctx.m(), n = s.ctx.n();
    ConePoint d = random_direction(rng, m, n);
    ConePoint p = project_critical_cone(s.ctx, d);
    CHECK(definitional(s.ctx, p, 1e-9));
    CHECK(norm(project_critical_cone(s.ctx, p) - p) < 1e-9 * std::max(1.0, norm(p)));
    CHECK(std::abs(inner(d - p, p)) < 1e-9 * std::max(1.0, norm(d) * norm(d)));
    // derivative images lie in C_K; the residual pairs nonpositively with them
    for (int i = 0; i < 3; ++i) {
      ConePoint c = pi_K_dirderiv(s.ctx, random_direction(rng, m, n));
      CHECK(in_critical_cone(s.ctx, c, 1e-9));
      CHECK(definitional(s.ctx, c, 1e-9));
      CHECK(inner(d - p, c) <= 1e-9 * std::max(1.0, norm(d) * norm(c)));
    }
    // random directions: the exact test and the definitional test agree
    CHECK(in_critical_cone(s.ctx, d, 1e-9) == definitional(s.ctx, d, 1e-9));
  }
}

TEST_CASE("critical cone in the interior cases") {
  Rng rng(34);
  StructuredPoint a = structured_point(rng, 2, 3, 1, ProjCase::interior_K);
  PointContext ca = make_context(a.point, 1);
  ConePoint d = random_direction(rng, 2, 3);
  CHECK(in_critical_cone(ca, d, 1e-12));
  StructuredPoint b = structured_point(rng, 2, 3, 1, ProjCase::interior_Kpolar);
  PointContext cb = make_context(b.point, 1);
  CHECK_FALSE(in_critical_cone(cb, d, 1e-9));
  CHECK(in_critical_cone(cb, ConePoint::zero(2, 3), 1e-12));
}

TEST_CASE("curvature operator against an entrywise loop") {
  Rng rng(35);
  for (int trial = 0; trial < 200; ++trial) {
    Setup s = random_setup(rng, true);
    const PointContext& c = s.ctx;
    const Index m = c.m(), n = c.n();
    const Mat A = random_gaussian(rng, m, n);
    const Mat X = frak_X(c, A);
    const Vec& sb = c.proj.sigma_bar;
    const Vec& u = c.proj.u_bar;
    const double th = c.theta();
    std::vector<int> cls(m, 2);
    for (int i : c.alpha) cls[i] = 0;
    for (int i : c.beta) cls[i] = 1;
    const bool case1 = c.kase() == ProjCase::boundary_pos;
    Mat ref = Mat::Zero(m, n);
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < m; ++j) {
        const double g = 0.5 * (A(i, j) + A(j, i)), h = 0.5 * (A(i, j) - A(j, i));
        if (cls[i] != cls[j]) ref(i, j) += th * (u(i) - u(j)) / (sb(i) - sb(j)) * g;
        const bool hpart = case1 ? (cls[i] != 2 || cls[j] != 2) : (cls[i] == 0 || cls[j] == 0);
        if (hpart && sb(i) + sb(j) > 0) ref(i, j) += th * (u(i) + u(j)) / (sb(i) + sb(j)) * h;
      }
      const bool fpart = case1 ? cls[i] != 2 : cls[i] == 0;
      if (fpart && sb(i) > 0)
        for (Index j = m; j < n; ++j) ref(i, j) = th * u(i) / sb(i) * A(i, j);
    }
    CHECK((X - ref).norm() < 1e-9 * std::max(1.0, ref.norm()));
    // linearity
    const Mat B = random_gaussian(rng, m, n);
    CHECK((frak_X(c, 2.5 * A + B) - 2.5 * X - frak_X(c, B)).norm() < 1e-10 * std::max(1.0, X.norm()));
  }
}

TEST_CASE("curvature operator vanishes on gamma blocks") {
  Rng rng(36);
  for (int trial = 0; trial < 50; ++trial) {
    StructuredPoint sp = structured_point(rng, 4, 6, 2, ProjCase::boundary_pos);
    PointContext c = make_context(sp.point, 2);
    Mat A = Mat::Zero(4, 6);
    for (int i : c.gamma) {
      for (int j : c.gamma) A(i, j) = 1.0 + i + j;
      for (int j = 4; j < 6; ++j) A(i, j) = 2.0;
    }
    CHECK(frak_X(c, A).norm() == 0.0);
  }
  CHECK(frak_X(make_context({0.0, Mat::Constant(1, 1, 2.0)}, 1), Mat::Zero(1, 1)).norm() == 0.0);
}

TEST_CASE("shifted polar condition on derivative pairs") {
  Rng rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    Setup s = random_setup(rng, trial % 5 != 0);
    const Index m = s.ctx.m(), n = s.ctx.n();
    ConePoint w = random_direction(rng, m, n);
    ConePoint d2 = pi_K_dirderiv(s.ctx, w);
    DerivativePair pair{w - d2, d2};
    CHECK(in_critical_polar_shifted(s.ctx, pair, 1e-8));
    const ConePoint v = polar_shift(s.ctx, pair);
    for (int i = 0; i < 5; ++i) {
      ConePoint c = project_critical_cone(s.ctx, random_direction(rng, m, n));
      CHECK(inner(v, c) <= 1e-7 * std::max(1.0, norm(v) * norm(c)));
    }
  }
}
