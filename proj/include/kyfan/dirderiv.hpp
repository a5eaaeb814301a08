#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kyfan/reduced_cones.hpp"

namespace kyfan {

struct DirDerivRequest {
  ConePoint base;
  ConePoint direction;
  int k = 1;
};

/// Pi_K'(x; dir) at the point described by ctx. The direction is given in the
/// original coordinates.
ConePoint pi_K_dirderiv(const PointContext& ctx, const ConePoint& dir);
ConePoint pi_K_dirderiv(const DirDerivRequest& req, double tol = kBoundaryTol);

/// Xi(tau, D(Ht)) in frame coordinates, with Phi_0 returned through phi0.
/// Requires a boundary context.
Mat assemble_xi(const PointContext& ctx, double tau, const Mat& Ht, double* phi0);

struct HomogeneityReport {
  double max_error = 0.0;  // max over s of ||D(s dir) - s D(dir)|| / max(1, s ||D(dir)||)
  bool ok = true;
};
HomogeneityReport positive_homogeneity_check(const DirDerivRequest& req, double tol = 1e-9);

/// (delta1, delta2) = ((dt, dX), (dzeta, dGamma)). delta2 is the K-side increment.
struct DerivativePair {
  ConePoint delta1;
  ConePoint delta2;
};

/// Per-equation residuals of the block characterization of
///   Pi_K'(x; delta1 + delta2) = delta2.
struct PredicateReport {
  std::vector<std::pair<std::string, double>> residuals;
  bool holds = true;
  double max_residual() const;
};

/// Evaluates the block equations (Phi-consistency, Hadamard relations, zero
/// blocks) for the case of ctx. Residuals are compared with
/// tol * max(1, ||delta1|| + ||delta2||).
PredicateReport fixed_point_report(const PointContext& ctx, const DerivativePair& pair,
                                   double tol);
bool fixed_point_predicate(const PointContext& ctx, const DerivativePair& pair, double tol);

}  // namespace kyfan
