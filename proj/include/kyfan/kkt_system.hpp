#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "kyfan/gph_derivative.hpp"
#include "kyfan/sampling.hpp"

namespace kyfan {

/// min f(x) s.t. h(x) = 0, G(x) in K, over x = (t, X) in R x R^{m x n}.
/// Second derivatives are available only as products with a direction.
struct ProblemInstance {
  Index m = 1, n = 1, p = 0;
  int k = 1;
  std::string tag;

  std::function<double(const ConePoint&)> f;
  std::function<ConePoint(const ConePoint&)> grad_f;
  std::function<ConePoint(const ConePoint&, const ConePoint&)> hess_f;  // (x, d) -> ∇²f d

  std::function<Vec(const ConePoint&)> h;
  std::function<Vec(const ConePoint&, const ConePoint&)> h_jac;         // (x, d) -> h'(x) d
  std::function<ConePoint(const ConePoint&, const Vec&)> h_adj;         // (x, l) -> h'(x)* l
  std::function<ConePoint(const ConePoint&, const Vec&, const ConePoint&)> h_hess;  // Σ l_i ∇²h_i d

  std::function<ConePoint(const ConePoint&)> G;
  std::function<ConePoint(const ConePoint&, const ConePoint&)> G_jac;
  std::function<ConePoint(const ConePoint&, const ConePoint&)> G_adj;
  std::function<ConePoint(const ConePoint&, const ConePoint&, const ConePoint&)> G_hess;  // (x, Y, d)
};

/// min ½||A vec(X) - b||² + rho ||X||_* s.t. E vec(X) = d, with vec column-major.
struct NlsInstance {
  Index m = 1, n = 1;
  Mat A;  // p x mn
  Vec b;
  double rho = 1.0;
  Mat E;  // q x mn, may have zero rows
  Vec d;

  Index q() const { return E.rows(); }
  void validate() const;
  /// k = m, f = ½||A(X) - b||² + rho t, h = E(X) - d, G = identity.
  ProblemInstance to_problem() const;
};

/// Flattening of R x R^{m x n}: (t, vec(X)).
Vec to_vec(const ConePoint& x);
ConePoint from_vec(const Vec& v, Index m, Index n);

struct KktTriple {
  ConePoint X;
  Vec lambda;
  ConePoint Y;
};

struct Perturbation {
  ConePoint df;
  Vec dh;
  ConePoint dG;
  static Perturbation zero(const ProblemInstance& inst);
  double norm() const;
};

struct Residual {
  ConePoint r1;
  Vec r2;
  ConePoint r3;
  double norm() const;
};

ConePoint lagrangian_grad(const ProblemInstance& inst, const KktTriple& z);
ConePoint lagrangian_hess(const ProblemInstance& inst, const KktTriple& z, const ConePoint& d);

Residual psi_residual(const ProblemInstance& inst, const KktTriple& z);
Residual psi_tilde_residual(const ProblemInstance& inst, const Perturbation& delta,
                            const KktTriple& z);

struct KktDirection {
  Perturbation dd;
  ConePoint dX;
  Vec dlambda;
  ConePoint dY;
};
Residual psi_tilde_dirderiv(const ProblemInstance& inst, const Perturbation& delta,
                            const KktTriple& z, const KktDirection& dir);

/// Three readings of Y in N_K(G): complementarity (G in K, Y in K°, <G, Y> = 0)
/// and the projection equation G = Pi_K(G + Y).
struct DecomReport {
  bool complementarity = false;
  bool projection = false;
  bool agree() const { return complementarity == projection; }
};
DecomReport decom_check(const ConePoint& g, const ConePoint& y, int k, double tol);

/// h'(x) z = 0, G'(x) z in T_K(G(x)), <f'(x), z> = 0.
bool problem_critical_cone_member(const ProblemInstance& inst, const ConePoint& xbar,
                                  const ConePoint& dir, double tol);

struct Multiplier {
  Vec lambda;
  ConePoint Y;
};

struct SoscReport {
  bool holds = false;
  std::string verdict;  // "holds (sampled)", "holds (vacuous)" or "violated"
  double min_value = std::numeric_limits<double>::infinity();
  ConePoint witness;    // unit direction attaining min_value
  int n_samples = 0;    // accepted critical directions
};
/// Samples unit directions of the problem critical cone and evaluates
///   max over multipliers of <z, ∇²L z> - Upsilon(Y, G'z).
SoscReport sosc_check(const ProblemInstance& inst, const ConePoint& xbar,
                      const std::vector<Multiplier>& multipliers, int n_samples, double tol,
                      std::uint64_t seed);

struct SrcqReport {
  bool holds = false;
  std::string verdict;  // "holds (no certificate found)" or "fails"
  double min_residual = std::numeric_limits<double>::infinity();
  std::optional<Multiplier> certificate;  // unit norm
};
/// Searches for a unit (lhat, Yhat) with h'* lhat + G'* Yhat = 0 and Yhat in
/// the polar of T_K(G(xbar)) ∩ Ybar^⊥.
SrcqReport srcq_check(const ProblemInstance& inst, const ConePoint& xbar,
                      const Multiplier& multiplier, int n_starts, double tol,
                      std::uint64_t seed);

struct ProbeReport {
  bool only_zero = true;
  std::string verdict;  // "only-zero (sampled)" or "witness"
  double min_norm = std::numeric_limits<double>::infinity();
  std::optional<KktDirection> witness;
};
/// Minimizes ||Psi~'((0, z); (0, Δ))|| over unit Δ = (dX, dlambda, dY).
ProbeReport kkt_isolated_calmness_probe(const ProblemInstance& inst, const KktTriple& z,
                                        int n_starts, double tol, std::uint64_t seed);

/// Dense matrices of h'(x) (p x N) and G'(x) (N x N), N = 1 + mn.
Mat dense_h_jac(const ProblemInstance& inst, const ConePoint& x);
Mat dense_G_jac(const ProblemInstance& inst, const ConePoint& x);

/// m = n = k = 1, A = 1, b = 3, rho = 1, no equality constraints.
/// Solution x = (2, 2) with multiplier Y = (-1, 1).
NlsInstance scalar_nls_fixture();

}  // namespace kyfan
