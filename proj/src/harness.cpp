#include "kyfan/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace kyfan {

namespace {

double triple_distance(const KktTriple& a, const KktTriple& b) {
  const double x = norm(a.X - b.X), l = (a.lambda - b.lambda).norm(), y = norm(a.Y - b.Y);
  return std::sqrt(x * x + l * l + y * y);
}

Vec gaussian(Rng& rng, Index n) {
  std::normal_distribution<double> g;
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

}  // namespace

SolveResult solve_nls(const NlsInstance& inst, const SolverSettings& st,
                      const Perturbation* delta, const KktTriple* warm) {
  const ProblemInstance prob = inst.to_problem();
  require(st.beta > 0 && st.max_iter > 0, "solver settings: beta and max_iter must be positive");
  const Index m = inst.m, n = inst.n, mn = m * n, q = inst.q();
  const Perturbation dl = delta ? *delta : Perturbation::zero(prob);
  require(dl.dh.size() == q, "perturbation does not match the instance");
  auto vecX = [](const Mat& X) { return Vec(Eigen::Map<const Vec>(X.data(), X.size())); };

  Mat K = Mat::Zero(mn + q, mn + q);
  K.topLeftCorner(mn, mn) = inst.A.transpose() * inst.A + st.beta * Mat::Identity(mn, mn);
  if (q) {
    K.topRightCorner(mn, q) = inst.E.transpose();
    K.bottomLeftCorner(q, mn) = inst.E;
  }
  const Eigen::CompleteOrthogonalDecomposition<Mat> cod(K);
  const Vec Atb = inst.A.transpose() * inst.b;

  ConePoint W = warm ? warm->X - dl.dG : ConePoint::zero(m, n);
  ConePoint u = warm ? (1.0 / st.beta) * warm->Y : ConePoint::zero(m, n);
  SolveResult res;
  res.residual = std::numeric_limits<double>::infinity();
  Vec rhs(mn + q);
  for (int it = 1; it <= st.max_iter; ++it) {
    ConePoint x;
    x.t = W.t + dl.dG.t - u.t - (inst.rho - dl.df.t) / st.beta;
    rhs.head(mn) = Atb + vecX(dl.df.X) + st.beta * vecX(W.X + dl.dG.X - u.X);
    if (q) rhs.tail(q) = inst.d + dl.dh;
    const Vec sol = cod.solve(rhs);
    x.X = Eigen::Map<const Mat>(sol.data(), m, n);
    const ConePoint Y = st.beta * (x - dl.dG - W + u);
    W = project_K(x - dl.dG + u, prob.k).onto_K;
    u = u + x - dl.dG - W;

    res.z = {x, sol.tail(q), Y};
    res.iters = it;
    res.residual = psi_tilde_residual(prob, dl, res.z).norm();
    if (!std::isfinite(res.residual)) break;
    if (res.residual <= st.stop_tol) return res;
  }
  res.diverged = true;
  return res;
}

void ExperimentConfig::validate() const {
  instance.validate();
  require(delta_max > 0, "delta_max must be positive");
  require(n_samples > 0, "n_samples must be positive");
  require(!scales.empty(), "scales must be nonempty");
  require(std::is_sorted(scales.begin(), scales.end()), "scales must be sorted ascending");
  require(scales.front() > 0 && scales.back() <= delta_max, "scales must lie in (0, delta_max]");
}

ExperimentResult run_error_bound_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const ProblemInstance prob = cfg.instance.to_problem();
  const Index m = prob.m, n = prob.n, N = 1 + m * n, q = prob.p;

  ExperimentResult out;
  const SolveResult ref = solve_nls(cfg.instance, cfg.reference_solver);
  if (ref.diverged) throw NumericFailure("reference solve did not reach the requested tolerance");
  out.reference = ref.z;
  out.reference_residual = ref.residual;

  for (std::size_t si = 0; si < cfg.scales.size(); ++si) {
    const double scale = cfg.scales[si];
    ScaleSummary sum;
    sum.scale = scale;
    double ratio_total = 0.0;
    for (int s = 0; s < cfg.n_samples; ++s) {
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(si), static_cast<std::uint32_t>(s)};
      Rng rng(seq);
      Vec v = gaussian(rng, 2 * N + q);
      v *= scale / v.norm();

      ErrorBoundRecord r;
      r.sample_id = s;
      r.scale = scale;
      r.delta_norm = scale;
      if (cfg.mode == SampleMode::perturbed) {
        const Perturbation dl{from_vec(v.head(N), m, n), v.segment(N, q), from_vec(v.tail(N), m, n)};
        const SolveResult sr = solve_nls(cfg.instance, cfg.solver, &dl, &ref.z);
        r.z = sr.z;
        r.solver_iters = sr.iters;
        r.flag = sr.diverged ? "diverged" : "ok";
      } else {
        r.z = {ref.z.X + from_vec(v.head(N), m, n), ref.z.lambda + v.segment(N, q),
               ref.z.Y + from_vec(v.tail(N), m, n)};
        r.flag = "ok";
      }
      r.psi_norm = psi_residual(prob, r.z).norm();
      r.piK_Y_norm = norm(project_K(r.z.Y, prob.k).onto_K);
      r.distance = triple_distance(r.z, ref.z);
      if (r.flag == "ok" && r.psi_norm == 0.0) r.flag = "zero_residual";
      if (r.flag == "ok") {
        r.ratio = r.distance / r.psi_norm;
        sum.max_ratio = std::max(sum.max_ratio, r.ratio);
        ratio_total += r.ratio;
        ++sum.n_ok;
      }
      sum.n_diverged += r.flag == "diverged";
      out.records.push_back(std::move(r));
    }
    sum.mean_ratio = sum.n_ok ? ratio_total / sum.n_ok : 0.0;
    out.summary.push_back(sum);
  }

  if (!cfg.output_path.empty()) {
    std::ofstream f(cfg.output_path);
    if (!f) throw InvalidInput("cannot open " + cfg.output_path);
    write_csv(f, out.records);
  }
  return out;
}

double estimate_modulus(const std::vector<ErrorBoundRecord>& records) {
  double smallest = std::numeric_limits<double>::infinity();
  for (const ErrorBoundRecord& r : records)
    if (r.flag == "ok" && r.psi_norm > 0) smallest = std::min(smallest, r.scale);
  require(std::isfinite(smallest), "estimate_modulus: no usable records");
  double mod = 0.0;
  for (const ErrorBoundRecord& r : records)
    if (r.flag == "ok" && r.psi_norm > 0 && r.scale == smallest)
      mod = std::max(mod, r.distance / r.psi_norm);
  return mod;
}

void write_csv(std::ostream& os, const std::vector<ErrorBoundRecord>& records) {
  os << "sample_id,scale,delta_norm,psi_norm,piK_Y_norm,distance,ratio,solver_iters,flag\n";
  char buf[512];
  for (const ErrorBoundRecord& r : records) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%s\n", r.sample_id,
                  r.scale, r.delta_norm, r.psi_norm, r.piK_Y_norm, r.distance, r.ratio,
                  r.solver_iters, r.flag.c_str());
    os << buf;
  }
}

}  // namespace kyfan
