#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixspec/lsd.hpp"
#include "mixspec/matrix_lab.hpp"
#include "mixspec/process.hpp"

namespace mixspec {

struct SizePair {
  int N = 0;
  int n = 0;
};

struct BlockParams {
  std::vector<int> m_ladder;      // defaults to {2, 4, 8}
  int a_m = 0;                    // 0 means a_m = m (p = m^2)
  std::vector<double> M_ladder;   // defaults to {10 sqrt(gamma_0)}
};

/// Shared configuration for the Monte Carlo campaigns. Replicate r draws its
/// randomness from derive_stream(base_seed, r), and sizes reuse replicate
/// indices so paired comparisons share randomness.
struct ExperimentConfig {
  ProcessSpec spec;
  std::vector<SizePair> sizes;
  int replicates = 5;
  std::vector<std::complex<double>> z_grid = {{0.0, 1.0}};
  std::uint64_t base_seed = 1;
  BlockParams blocks;
  std::vector<MatrixKind> ensembles = {MatrixKind::Bn_source};  // lsd-convergence only
  int gamma_lags = -1;      // -1: model-dependent default for the solved LSD
  double v = 1e-3;          // Stieltjes inversion height
  SolverOptions solver;
  double envelope_alpha = 1.5;

  void validate() const;
  nlohmann::json to_json() const;
};

/// Result of one campaign: structured metrics plus CSV tables ready to be
/// persisted. Metrics are bit-for-bit reproducible for a fixed config; the
/// wall clock is the only volatile field and can be excluded.
struct ExperimentReport {
  std::string experiment;
  nlohmann::json config_echo;
  nlohmann::json metrics;
  std::vector<std::pair<std::string, std::string>> tables;  // filename -> csv
  double wall_clock_seconds = 0.0;

  nlohmann::json to_json(bool include_wall_clock = true) const;
};

/// ESDs of the configured ensembles against the solved limiting law.
ExperimentReport run_lsd_convergence(const ExperimentConfig& cfg);

/// |S_{B_n}(z) - S_{G_n}(z)| per replicate plus the difference of replicate
/// means, with a G-vs-G control at matched size.
ExperimentReport run_universality(const ExperimentConfig& cfg);

/// Replicate spread of S_{B_n}(z) across sizes, reported next to the
/// theoretical concentration envelope (an upper bound, not a fit).
ExperimentReport run_concentration(const ExperimentConfig& cfg);

/// Block/truncation/resampling approximation ladder: Stieltjes gaps between
/// B_n, the block-projected matrix and its independently resampled version,
/// trace defects, and the block trace bound.
ExperimentReport run_approximation_chain(const ExperimentConfig& cfg);

/// Persists report.json plus every CSV table into dir (atomic writes).
void write_report(const ExperimentReport& report, const std::string& dir);

/// Closed-form autocovariance truncation used for the solved LSD.
int default_gamma_lags(const ProcessSpec& spec);

/// Solved limiting-law CDF for a process at aspect ratio c (inversion
/// height v), built on the default density grid.
LsdCdf solve_lsd_cdf(const ProcessSpec& spec, double c, double v, const SolverOptions& opts,
                     int gamma_lags = -1);

}  // namespace mixspec
