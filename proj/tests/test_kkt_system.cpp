#include <doctest.h>

#include "kyfan/kkt_system.hpp"

using namespace kyfan;

namespace {

Vec gaussian_vec(Rng& rng, Index n) { return random_gaussian(rng, n, 1).col(0); }

NlsInstance random_nls(Rng& rng, Index m, Index n, Index p, Index q) {
  NlsInstance s;
  s.m = m;
  s.n = n;
  s.A = random_gaussian(rng, p, m * n);
  s.b = gaussian_vec(rng, p);
  s.rho = 0.5;
  s.E = random_gaussian(rng, q, m * n);
  s.d = gaussian_vec(rng, q);
  return s;
}

KktTriple random_triple(Rng& rng, const ProblemInstance& inst) {
  return {random_direction(rng, inst.m, inst.n), gaussian_vec(rng, inst.p),
          random_direction(rng, inst.m, inst.n)};
}

Perturbation random_perturbation(Rng& rng, const ProblemInstance& inst, double s) {
  return {s * random_direction(rng, inst.m, inst.n), s * gaussian_vec(rng, inst.p),
          s * random_direction(rng, inst.m, inst.n)};
}

Residual diff(const Residual& a, const Residual& b, double s) {
  return {(1.0 / s) * (a.r1 - b.r1), (a.r2 - b.r2) / s, (1.0 / s) * (a.r3 - b.r3)};
}

Residual minus(const Residual& a, const Residual& b) { return diff(a, b, 1.0); }

// Scalar fixture with the equality X = 2 stated twice.
NlsInstance duplicated_constraint_fixture() {
  NlsInstance s = scalar_nls_fixture();
  s.E = Mat::Constant(2, 1, 1.0);
  s.d = Vec::Constant(2, 2.0);
  return s;
}

const KktTriple kScalarSolution{ConePoint{2.0, Mat::Constant(1, 1, 2.0)}, Vec(0),
                                ConePoint{-1.0, Mat::Constant(1, 1, 1.0)}};

}  // namespace

TEST_CASE("scalar fixture solution has zero residual") {
  const ProblemInstance inst = scalar_nls_fixture().to_problem();
  CHECK(psi_residual(inst, kScalarSolution).norm() < 1e-14);
  KktTriple off = kScalarSolution;
  off.X.X(0, 0) = 2.5;
  CHECK(psi_residual(inst, off).norm() > 0.1);
}

TEST_CASE("instance validation") {
  NlsInstance s = scalar_nls_fixture();
  s.rho = 0.0;
  CHECK_THROWS(s.validate());
  s = scalar_nls_fixture();
  s.b = Vec::Zero(2);
  CHECK_THROWS(s.to_problem());
}

TEST_CASE("adjoints match Jacobians") {
  Rng rng(61);
  const ProblemInstance inst = random_nls(rng, 2, 3, 7, 2).to_problem();
  for (int t = 0; t < 20; ++t) {
    const ConePoint x = random_direction(rng, 2, 3), d = random_direction(rng, 2, 3);
    const Vec l = gaussian_vec(rng, inst.p);
    CHECK(std::abs(inst.h_jac(x, d).dot(l) - inner(d, inst.h_adj(x, l))) < 1e-10);
    const ConePoint y = random_direction(rng, 2, 3);
    CHECK(std::abs(inner(inst.G_jac(x, d), y) - inner(d, inst.G_adj(x, y))) < 1e-12);
    // ∇f against a central difference
    const double s = 1e-6;
    const double fd = (inst.f(x + s * d) - inst.f(x - s * d)) / (2 * s);
    CHECK(std::abs(fd - inner(inst.grad_f(x), d)) < 1e-6 * std::max(1.0, std::abs(fd)));
  }
  const Mat H = dense_h_jac(inst, ConePoint::zero(2, 3));
  CHECK(H.rows() == 2);
  CHECK(H.cols() == 7);
}

TEST_CASE("zero perturbation reproduces the unperturbed residual") {
  Rng rng(62);
  const ProblemInstance inst = random_nls(rng, 2, 3, 6, 2).to_problem();
  for (int t = 0; t < 50; ++t) {
    const KktTriple z = random_triple(rng, inst);
    const Residual a = psi_residual(inst, z);
    const Residual b = psi_tilde_residual(inst, Perturbation::zero(inst), z);
    CHECK(minus(a, b).norm() == 0.0);
  }
}

TEST_CASE("perturbed residual directional derivative matches finite differences") {
  Rng rng(63);
  const ProblemInstance inst = random_nls(rng, 2, 3, 6, 2).to_problem();
  const double s = 1e-7;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const KktTriple z = random_triple(rng, inst);
    const Perturbation delta = random_perturbation(rng, inst, 0.1);
    const KktDirection dir{random_perturbation(rng, inst, 1.0), random_direction(rng, 2, 3),
                           gaussian_vec(rng, inst.p), random_direction(rng, 2, 3)};
    const Perturbation d2{delta.df + s * dir.dd.df, delta.dh + s * dir.dd.dh,
                          delta.dG + s * dir.dd.dG};
    const KktTriple z2{z.X + s * dir.dX, z.lambda + s * dir.dlambda, z.Y + s * dir.dY};
    const Residual fd = diff(psi_tilde_residual(inst, d2, z2), psi_tilde_residual(inst, delta, z), s);
    const Residual an = psi_tilde_dirderiv(inst, delta, z, dir);
    worst = std::max(worst, minus(fd, an).norm());
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("complementarity and projection readings agree") {
  Rng rng(64);
  const ProjCase cases[] = {ProjCase::interior_K, ProjCase::interior_Kpolar,
                            ProjCase::boundary_pos, ProjCase::boundary_zero};
  int members = 0;
  for (int t = 0; t < 500; ++t) {
    const Index m = 1 + t % 3, n = m + t % 2;
    const int k = 1 + static_cast<int>(t % m);
    ConePoint g, y;
    if (t % 2 == 0) {
      const ConePoint w = structured_point(rng, m, n, k, cases[t / 2 % 4]).point;
      const ProjectionResult pr = project_K(w, k);
      g = pr.onto_K;
      y = pr.onto_Kpolar;
    } else {
      g = random_direction(rng, m, n);
      y = random_direction(rng, m, n);
    }
    const DecomReport r = decom_check(g, y, k, 1e-9);
    CHECK(r.agree());
    members += r.projection;
  }
  CHECK(members >= 250);
}

TEST_CASE("problem critical cone of the scalar fixture") {
  const ProblemInstance inst = scalar_nls_fixture().to_problem();
  const ConePoint xbar = kScalarSolution.X;
  CHECK(problem_critical_cone_member(inst, xbar, ConePoint{1.0, Mat::Constant(1, 1, 1.0)}, 1e-9));
  CHECK_FALSE(problem_critical_cone_member(inst, xbar, ConePoint{1.0, Mat::Constant(1, 1, 0.0)}, 1e-9));
  CHECK_FALSE(problem_critical_cone_member(inst, xbar, ConePoint{0.0, Mat::Constant(1, 1, 1.0)}, 1e-9));
}

TEST_CASE("second-order checks on the scalar fixture") {
  const ProblemInstance inst = scalar_nls_fixture().to_problem();
  const Multiplier mu{Vec(0), kScalarSolution.Y};
  const SoscReport so = sosc_check(inst, kScalarSolution.X, {mu}, 50, 1e-8, 7);
  CHECK(so.holds);
  CHECK(so.n_samples > 0);
  // The only unit critical direction is (1, 1)/sqrt(2), where <z, ∇²L z> = 1/2
  // and the sigma term vanishes for m = n = 1.
  CHECK(so.min_value == doctest::Approx(0.5).epsilon(1e-6));

  const SrcqReport sr = srcq_check(inst, kScalarSolution.X, mu, 20, 1e-8, 7);
  CHECK(sr.holds);
  CHECK_FALSE(sr.certificate.has_value());

  const ProbeReport pr = kkt_isolated_calmness_probe(inst, kScalarSolution, 50, 1e-8, 7);
  CHECK(pr.only_zero);
  CHECK(pr.min_norm > 1e-3);
}

TEST_CASE("duplicated equality constraint breaks SRCQ and calmness") {
  const ProblemInstance inst = duplicated_constraint_fixture().to_problem();
  const KktTriple z{kScalarSolution.X, Vec::Zero(2), kScalarSolution.Y};
  REQUIRE(psi_residual(inst, z).norm() < 1e-14);
  const Multiplier mu{z.lambda, z.Y};

  const SrcqReport sr = srcq_check(inst, z.X, mu, 20, 1e-8, 3);
  CHECK_FALSE(sr.holds);
  REQUIRE(sr.certificate.has_value());
  const Multiplier& c = *sr.certificate;
  const ConePoint adj = inst.h_adj(z.X, c.lambda) + inst.G_adj(z.X, c.Y);
  CHECK(norm(adj) < 1e-8);
  CHECK(c.lambda.squaredNorm() + norm(c.Y) * norm(c.Y) == doctest::Approx(1.0));

  const ProbeReport pr = kkt_isolated_calmness_probe(inst, z, 50, 1e-8, 3);
  CHECK_FALSE(pr.only_zero);
  REQUIRE(pr.witness.has_value());
  const Residual r = psi_tilde_dirderiv(inst, Perturbation::zero(inst), z, *pr.witness);
  CHECK(r.norm() < 1e-8);

  // ker h' leaves only t free, and that direction is not critical.
  const SoscReport so = sosc_check(inst, z.X, {mu}, 50, 1e-8, 3);
  CHECK(so.holds);
  CHECK(so.n_samples == 0);
  CHECK(so.verdict == std::string("holds (vacuous)"));
}

TEST_CASE("sampled checks are deterministic in the seed") {
  Rng rng(65);
  const ProblemInstance inst = random_nls(rng, 2, 2, 5, 1).to_problem();
  const KktTriple z = random_triple(rng, inst);
  const ProbeReport a = kkt_isolated_calmness_probe(inst, z, 5, 1e-8, 11);
  const ProbeReport b = kkt_isolated_calmness_probe(inst, z, 5, 1e-8, 11);
  CHECK(a.min_norm == b.min_norm);
}
