#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mixspec/process.hpp"
#include "mixspec/spectral.hpp"

namespace mixspec {

/// Ensemble dimensions; the aspect ratio c = N/n is derived.
struct EnsembleConfig {
  int N = 0;
  int n = 0;

  double c() const { return static_cast<double>(N) / n; }
  void validate() const;  // N >= 2, n >= 2
};

/// An N x n data matrix with its provenance.
struct DataMatrix {
  Eigen::MatrixXd entries;
  MatrixKind kind = MatrixKind::unspecified;
  ProcessSpec spec;
  std::uint64_t seed = 0;
  int block_m = 0;     // blocked kinds only
  int block_a_m = 0;
  double block_M = 0.0;
};

/// Gram matrix (1/n) X X^T of a data matrix.
Eigen::MatrixXd gram_of(const DataMatrix& data);

/// Partition of a length-N column into active blocks of length p = a_m * m
/// separated by gaps of length 3m, plus a tail gap. Intervals are 1-based
/// and inclusive, relative to the column; the same pattern repeats in every
/// column of the data matrix.
struct BlockScheme {
  struct Interval {
    long lo = 1, hi = 0;  // empty when hi < lo
    bool empty() const { return hi < lo; }
    long size() const { return empty() ? 0 : hi - lo + 1; }
  };

  int N = 0;
  int m = 0;
  int a_m = 0;
  int p = 0;
  int k_N = 0;
  double M = 0.0;                // truncation level
  std::vector<Interval> active;  // k_N blocks of length p
  std::vector<Interval> gaps;    // k_N gaps of length 3m plus the tail gap

  /// Proof-side constraint m <= sqrt(N)/2; exceeding it is legal here but
  /// flagged so reports can surface it.
  bool m_exceeds_proof_bound() const;
};

BlockScheme build_block_scheme(int N, int m, int a_m, double M);

struct GramPair {
  DataMatrix data;
  Eigen::MatrixXd gram;
};

/// Single-trajectory Gram matrix: X filled column-major with X_{(j-1)N+i},
/// B = (1/n) X X^T. Checks the exact identity
/// (1/N) Tr B = (1/(Nn)) sum X_k^2.
GramPair build_Bn(const Trajectory& traj, const EnsembleConfig& cfg);

/// Sample covariance of n independent length-N trajectories.
Eigen::MatrixXd build_An(const ProcessSpec& spec, const EnsembleConfig& cfg, std::uint64_t seed);

/// Gaussian matched ensemble: columns L w with L the Cholesky factor of the
/// Toeplitz covariance built from gamma (regularized once by 1e-12 gamma_0
/// on the diagonal if the factorization fails).
Eigen::MatrixXd build_Gn(const AutocovarianceSeq& gamma, const EnsembleConfig& cfg,
                         std::uint64_t seed);

/// Block-projected matrix: on active blocks the entries are the centered
/// truncated projections given the block innovations; gaps are zero.
DataMatrix build_blocked_matrix(const Trajectory& traj, const BlockScheme& scheme,
                                const EnsembleConfig& cfg);

/// Same block functions applied to freshly drawn i.i.d. block innovations
/// (every block tuple sampled independently from the stationary block law).
DataMatrix resample_independent_blocks(const ProcessSpec& spec, const BlockScheme& scheme,
                                       const EnsembleConfig& cfg, std::uint64_t seed);

struct PerturbationBound {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Spectral-perturbation inequality for two N x n matrices:
/// |S_{AA^T/n}(z) - S_{BB^T/n}(z)| <=
///   sqrt(2)/(N v^2) |Tr(AA^T/n + BB^T/n)|^{1/2} |Tr (A-B)(A-B)^T / n|^{1/2}.
PerturbationBound stieltjes_perturbation_bound(const Eigen::MatrixXd& a,
                                               const Eigen::MatrixXd& b,
                                               std::complex<double> z);

}  // namespace mixspec
