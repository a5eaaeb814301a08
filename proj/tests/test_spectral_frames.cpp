#include <doctest.h>

#include <limits>

#include "kyfan/sampling.hpp"
#include "kyfan/spectral_frames.hpp"

using namespace kyfan;

TEST_CASE("svd_frame reconstructs and is orthogonal") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Index m = 1 + trial % 4, n = m + trial % 3;
    Mat X = random_gaussian(rng, m, n);
    if (trial % 5 == 0) X.row(0).setZero();
    SvdFrame f = svd_frame(X);
    CHECK((f.compose(f.sigma) - X).norm() <= 1e-12 * std::max(1.0, X.norm()));
    CHECK((f.U.transpose() * f.U - Mat::Identity(m, m)).norm() < 1e-12);
    CHECK((f.V.transpose() * f.V - Mat::Identity(n, n)).norm() < 1e-12);
    for (Index j = 0; j < m; ++j) {
      Index imax;
      f.U.col(j).cwiseAbs().maxCoeff(&imax);
      CHECK(f.U(imax, j) >= 0);
    }
    CHECK(f.a.size() + f.b.size() == static_cast<std::size_t>(m));
    CHECK(f.c.size() == static_cast<std::size_t>(n - m));
  }
}

TEST_CASE("svd_frame index sets on small examples") {
  Mat X(2, 2);
  X << 3, 0, 0, 1;
  SvdFrame f = svd_frame(X);
  CHECK(f.sigma(0) == doctest::Approx(3));
  CHECK(f.sigma(1) == doctest::Approx(1));
  CHECK(f.a == IndexList{0, 1});
  CHECK(f.b.empty());
  REQUIRE(f.groups.size() == 2);
  CHECK(f.r() == 2);

  SvdFrame z = svd_frame(Mat::Zero(2, 2));
  CHECK(z.a.empty());
  CHECK(z.b == IndexList{0, 1});
  REQUIRE(z.groups.size() == 1);
  CHECK(z.groups[0] == IndexList{0, 1});
  CHECK(z.r() == 0);
}

TEST_CASE("svd_frame groups repeated singular values") {
  Rng rng(3);
  const Mat U = random_orthogonal(rng, 4), V = random_orthogonal(rng, 5);
  Vec s(4);
  s << 2, 2, 1, 0;
  const Mat X = U * s.asDiagonal() * V.leftCols(4).transpose();
  SvdFrame f = svd_frame(X);
  REQUIRE(f.groups.size() == 3);
  CHECK(f.groups[0] == IndexList{0, 1});
  CHECK(f.groups[1] == IndexList{2});
  CHECK(f.groups[2] == IndexList{3});
  CHECK(f.b == IndexList{3});
  CHECK(f.nu.size() == 2);
}

TEST_CASE("svd_frame rejects non-finite input") {
  Mat X = Mat::Zero(2, 2);
  X(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(svd_frame(X), InvalidInput);
}

TEST_CASE("sym and skew parts") {
  Rng rng(1);
  Mat A = random_gaussian(rng, 3, 3);
  CHECK((sym_part(A) + skew_part(A) - A).norm() < 1e-15);
  CHECK((sym_part(A) - sym_part(A).transpose()).norm() == 0.0);
  CHECK_THROWS_AS(sym_part(Mat::Zero(2, 3)), InvalidInput);
  CHECK_THROWS_AS(skew_part(Mat::Zero(2, 3)), InvalidInput);
}

TEST_CASE("hadamard coefficients") {
  Vec sb(2), s(2);
  sb << 1, 0;
  s << 2, 1;
  HadamardCoeffs h = hadamard_coeffs(sb, s, 3, 1e-12);
  CHECK(h.E1(0, 1) == doctest::Approx(1.0));
  CHECK(h.E2(0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(h.E1(0, 0) == 0.0);
  CHECK(h.F(0, 0) == doctest::Approx(0.5));
  CHECK(h.F(1, 0) == doctest::Approx(0.0));

  Vec z = Vec::Zero(2);
  HadamardCoeffs hz = hadamard_coeffs(z, z, 2, 1e-12);
  CHECK(hz.E2.norm() == 0.0);
}

TEST_CASE("b_operator and pbar diagonalisation") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Index m = 1 + trial % 3, n = m + trial % 2 + (trial % 4 == 0 ? 2 : 0);
    Mat X = random_gaussian(rng, m, n);
    if (m > 1 && trial % 2) {
      // force a rank deficiency so b is nonempty
      SvdFrame g = svd_frame(X);
      Vec s = g.sigma;
      s(m - 1) = 0;
      X = g.compose(s);
    }
    SvdFrame f = svd_frame(X);
    const Mat P = build_pbar(f);
    CHECK((P.transpose() * P - Mat::Identity(m + n, m + n)).norm() < 1e-12);
    const Mat D = P.transpose() * b_operator(X) * P;
    Vec expect = Vec::Zero(m + n);
    Index q = 0;
    for (int i : f.a) expect(q++) = f.sigma(i);
    q += static_cast<Index>(2 * f.b.size() + f.c.size());
    for (auto it = f.a.rbegin(); it != f.a.rend(); ++it) expect(q++) = -f.sigma(*it);
    CHECK((D - Mat(expect.asDiagonal())).norm() < 1e-10 * std::max(1.0, X.norm()));
  }
}
