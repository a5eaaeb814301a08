#pragma once

#include <random>

#include "kyfan/cone_core.hpp"

namespace kyfan {

using Rng = std::mt19937_64;

Mat random_gaussian(Rng& rng, Index rows, Index cols);
Mat random_orthogonal(Rng& rng, Index n);
ConePoint random_direction(Rng& rng, Index m, Index n);

/// A point X = Xbar + Gammabar built from a prescribed spectral structure, so
/// that its projection case, theta and u_bar are known in closed form.
struct StructuredPoint {
  ConePoint point;
  ConePoint k_part;      // (tbar, Xbar)
  ConePoint polar_part;  // (zetabar, Gammabar)
  int k = 1;
  ProjCase kase = ProjCase::interior_K;
  double theta = 0.0;
  Vec sigma, sigma_bar, u_bar;
  int k0 = 0, k1 = 0;
};

struct StructureOptions {
  double p_on_bdK = 0.2;     // chance of theta = 0 in the boundary cases
  double p_tie = 0.3;        // chance of repeating a value inside alpha/gamma
  double p_full_sum = 0.5;   // boundary_zero: sum of u_bar over beta equals k - k0
};

StructuredPoint structured_point(Rng& rng, Index m, Index n, int k, ProjCase kase,
                                 const StructureOptions& opt = {});

}  // namespace kyfan
