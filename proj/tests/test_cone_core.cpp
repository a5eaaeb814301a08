#include <doctest.h>

#include "kyfan/cone_core.hpp"
#include "kyfan/sampling.hpp"
#include "oracles.hpp"

using namespace kyfan;

namespace {

ConePoint pt(double t, std::initializer_list<std::initializer_list<double>> rows) {
  const Index m = static_cast<Index>(rows.size());
  const Index n = static_cast<Index>(rows.begin()->size());
  Mat X(m, n);
  Index i = 0;
  for (auto r : rows) {
    Index j = 0;
    for (double v : r) X(i, j++) = v;
    ++i;
  }
  return {t, X};
}

}  // namespace

TEST_CASE("kyfan_norm") {
  Vec s(3);
  s << 3, -2, 1;
  CHECK(kyfan_norm(s, 1) == doctest::Approx(3));
  CHECK(kyfan_norm(s, 2) == doctest::Approx(5));
  CHECK_THROWS_AS(kyfan_norm(s, 0), InvalidInput);
  CHECK_THROWS_AS(kyfan_norm(s, 4), InvalidInput);
}

TEST_CASE("scalar projection example") {
  ProjectionResult r = project_K(pt(0, {{2}}), 1);
  CHECK(r.onto_K.t == doctest::Approx(1));
  CHECK(r.onto_K.X(0, 0) == doctest::Approx(1));
  CHECK(r.onto_Kpolar.t == doctest::Approx(-1));
  CHECK(r.onto_Kpolar.X(0, 0) == doctest::Approx(1));
  CHECK(r.theta == doctest::Approx(1));
  CHECK(r.kase == ProjCase::boundary_pos);
}

TEST_CASE("two by two projection example") {
  ProjectionResult r = project_K(pt(1, {{2, 0}, {0, 0}}), 1);
  CHECK(r.onto_K.t == doctest::Approx(1.5));
  CHECK(r.onto_K.X(0, 0) == doctest::Approx(1.5));
  CHECK(std::abs(r.onto_K.X(1, 1)) < 1e-14);
  CHECK(r.theta == doctest::Approx(0.5));
  CHECK(r.u_bar(0) == doctest::Approx(1));
  CHECK(r.u_bar(1) == doctest::Approx(0));
  CHECK(r.k0 == 0);
}

TEST_CASE("interior and apex cases") {
  ProjectionResult a = project_K(pt(5, {{1, 0}, {0, 1}}), 1);
  CHECK(a.kase == ProjCase::interior_K);
  CHECK(a.onto_K.t == 5.0);
  CHECK(norm(a.onto_Kpolar) == 0.0);

  ProjectionResult b = project_K(pt(-5, {{1, 0}, {0, 1}}), 2);
  CHECK(b.kase == ProjCase::interior_Kpolar);
  CHECK(norm(b.onto_K) == 0.0);

  ProjectionResult z = project_K(ConePoint::zero(2, 3), 2);
  CHECK(z.kase == ProjCase::boundary_zero);
  CHECK(z.on_bdK);
  CHECK(z.k0 == 0);
}

TEST_CASE("membership tests") {
  CHECK(in_K(pt(3, {{2, 0}, {0, 1}}), 2, 1e-12));
  CHECK(!in_K(pt(2.9, {{2, 0}, {0, 1}}), 2, 1e-12));
  CHECK(!in_Kpolar(pt(-2, {{2, 0}, {0, 1}}), 1, 1e-12));
  CHECK(in_Kpolar(pt(-2, {{2, 0}, {0, 1}}), 2, 1e-12));
  CHECK(!in_Kpolar(pt(-1.4, {{2, 0}, {0, 1}}), 2, 1e-12));
  CHECK_THROWS_AS(in_K(pt(1, {{1, 2}}), 2, 0.0), InvalidInput);
}

TEST_CASE("Moreau decomposition on random points") {
  Rng rng(2024);
  std::normal_distribution<double> nd(0.0, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Index m = 1 + trial % 4, n = m + trial % 3;
    const int k = 1 + static_cast<int>(trial % m);
    ConePoint p{nd(rng), random_gaussian(rng, m, n)};
    ProjectionResult r = project_K(p, k);
    const double sc = std::max(1.0, norm(p));
    CHECK(norm(r.onto_K + r.onto_Kpolar - p) <= 1e-10 * sc);
    CHECK(std::abs(inner(r.onto_K, r.onto_Kpolar)) <= 1e-9 * sc * sc);
    CHECK(in_K(r.onto_K, k, 1e-10 * sc));
    CHECK(in_Kpolar(r.onto_Kpolar, k, 1e-10 * sc));
  }
}

TEST_CASE("structured points recover their construction") {
  Rng rng(99);
  const ProjCase cases[] = {ProjCase::interior_K, ProjCase::interior_Kpolar,
                            ProjCase::boundary_pos, ProjCase::boundary_zero};
  for (int trial = 0; trial < 400; ++trial) {
    const Index m = 1 + trial % 4, n = m + (trial / 4) % 3;
    const int k = 1 + static_cast<int>((trial / 12) % m);
    const ProjCase c = cases[trial % 4];
    StructuredPoint sp = structured_point(rng, m, n, k, c);
    ProjectionResult r = project_K(sp.point, k);
    CAPTURE(trial);
    CHECK(r.kase == sp.kase);
    CHECK(norm(r.onto_K - sp.k_part) <= 1e-9 * std::max(1.0, norm(sp.point)));
    CHECK(r.theta == doctest::Approx(sp.theta).epsilon(1e-9));
    if (r.is_boundary()) {
      CHECK(r.k0 == sp.k0);
      if (c == ProjCase::boundary_pos) CHECK(r.k1 == sp.k1);
      CHECK((r.u_bar - sp.u_bar).norm() <= 1e-8);
    }
  }
}

TEST_CASE("projection matches the QP oracle") {
  Rng rng(314);
  std::normal_distribution<double> nd(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Index m = 1 + trial % 4, n = m + 1;
    const int k = 1 + static_cast<int>(trial % m);
    ConePoint p{nd(rng), random_gaussian(rng, m, n)};
    ProjectionResult r = project_K(p, k);
    oracle::VecProjection o = oracle::project_kyfan_epigraph(p.t, r.frame.sigma, k);
    CAPTURE(trial);
    REQUIRE(o.converged);
    CHECK(std::abs(o.eta - r.onto_K.t) <= 1e-6);
    CHECK((o.d - r.sigma_bar).norm() <= 1e-6);
  }
}

TEST_CASE("classification does not depend on the overall scale") {
  Rng rng(17);
  const ProjCase cases[] = {ProjCase::interior_K, ProjCase::interior_Kpolar,
                            ProjCase::boundary_pos, ProjCase::boundary_zero};
  for (int trial = 0; trial < 200; ++trial) {
    StructuredPoint sp = structured_point(rng, 3, 4, 2, cases[trial % 4]);
    ConePoint d = random_direction(rng, 3, 4);
    // the apex plus a tiny step must project like the unit step
    for (const ConePoint& p : {sp.point, d}) {
      ProjectionResult big = project_K(p, 2);
      for (double s : {1e-6, 1e-9}) {
        ProjectionResult small = project_K(s * p, 2);
        CHECK(small.kase == big.kase);
        CHECK(norm(small.onto_K - s * big.onto_K) <= 1e-12 * s * std::max(1.0, norm(p)));
      }
    }
  }
}
