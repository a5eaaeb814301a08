#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kyfan/kkt_system.hpp"

namespace kyfan {

struct SolverSettings {
  int max_iter = 50000;
  double stop_tol = 1e-9;  // on the perturbed KKT residual
  double beta = 1.0;       // ADMM penalty
};

struct SolveResult {
  KktTriple z;
  double residual = 0.0;
  int iters = 0;
  bool diverged = false;
};

/// ADMM on the splitting x - delta_G = W, W in K, for the NLS problem perturbed
/// by delta (nullptr: unperturbed). The multiplier Y is read off the x-update,
/// so the first two residual blocks vanish up to the linear solve.
SolveResult solve_nls(const NlsInstance& inst, const SolverSettings& settings,
                      const Perturbation* delta = nullptr, const KktTriple* warm = nullptr);

enum class SampleMode { perturbed, jitter };

struct ExperimentConfig {
  NlsInstance instance;
  double delta_max = 1e-1;
  int n_samples = 50;
  std::uint64_t seed = 0;
  std::vector<double> scales{1e-4, 1e-3, 1e-2};  // ascending
  SolverSettings solver{50000, 1e-12, 1.0};
  SolverSettings reference_solver{200000, 1e-13, 1.0};
  SampleMode mode = SampleMode::perturbed;
  std::string output_path;  // CSV destination, empty for none

  void validate() const;
};

struct ErrorBoundRecord {
  int sample_id = 0;
  double scale = 0.0;
  double delta_norm = 0.0;
  KktTriple z;
  double psi_norm = 0.0;    // ||Psi(z)|| of the unperturbed problem
  double piK_Y_norm = 0.0;  // ||Pi_K(Y)||
  double distance = 0.0;    // to the reference KKT point
  double ratio = 0.0;       // distance / psi_norm, 0 when skipped
  int solver_iters = 0;
  std::string flag;         // "ok", "diverged" or "zero_residual"
};

struct ScaleSummary {
  double scale = 0.0;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  int n_ok = 0;
  int n_diverged = 0;
};

struct ExperimentResult {
  KktTriple reference;
  double reference_residual = 0.0;
  std::vector<ErrorBoundRecord> records;  // sorted by (scale index, sample_id)
  std::vector<ScaleSummary> summary;      // in the order of cfg.scales
};

ExperimentResult run_error_bound_experiment(const ExperimentConfig& cfg);

/// Max distance/residual over the "ok" records of the smallest scale present.
/// Throws InvalidInput when that band is empty.
double estimate_modulus(const std::vector<ErrorBoundRecord>& records);

void write_csv(std::ostream& os, const std::vector<ErrorBoundRecord>& records);

}  // namespace kyfan
