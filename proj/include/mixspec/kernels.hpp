#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mixspec::kernels {

// Data-parallel kernels. Each kernel comes in an OpenMP flavor (the default
// used by the library) and a serial reference flavor kept for testing and
// benchmarking. Both flavors traverse every output element in the same
// order, so their results are bit-for-bit identical regardless of the
// thread count.

/// Gram matrix (1/n) X X^T of an N x n matrix.
Eigen::MatrixXd gram(const Eigen::MatrixXd& x);
Eigen::MatrixXd gram_serial(const Eigen::MatrixXd& x);

/// n columns z_j = L w_j with w_j standard normal, one derived stream per
/// column. L is lower triangular (only its lower part is read).
Eigen::MatrixXd gaussian_columns(const Eigen::MatrixXd& chol, int n, std::uint64_t seed);
Eigen::MatrixXd gaussian_columns_serial(const Eigen::MatrixXd& chol, int n, std::uint64_t seed);

/// Empirical Stieltjes transform (1/N) sum_k (lambda_k - z)^{-1} over a batch
/// of z points.
std::vector<std::complex<double>> stieltjes_batch(std::span<const double> eigenvalues,
                                                  std::span<const std::complex<double>> zs);
std::vector<std::complex<double>> stieltjes_batch_serial(std::span<const double> eigenvalues,
                                                         std::span<const std::complex<double>> zs);

/// Biased-normalization autocovariances gamma_k = (1/L) sum X_t X_{t+k},
/// k = 0..max_lag.
std::vector<double> autocovariance(std::span<const double> x, int max_lag);
std::vector<double> autocovariance_serial(std::span<const double> x, int max_lag);

}  // namespace mixspec::kernels
