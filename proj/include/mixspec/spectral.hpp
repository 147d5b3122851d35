#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace mixspec {

enum class MatrixKind { Bn_source, An_source, Gn_source, blocked, blocked_star, unspecified };

std::string to_string(MatrixKind kind);

/// Full real spectrum of a symmetric matrix, ascending.
struct GramSpectrum {
  std::vector<double> eigenvalues;
  int N = 0;
  int n = 0;
  double c = 0.0;
  MatrixKind kind = MatrixKind::unspecified;
  int clipped = 0;  // tiny negative eigenvalues clipped to 0
};

/// Symmetric eigensolve. Requires max|A - A^T| <= 1e-8 * (1 + max|A|);
/// eigenvalues in [-1e-10 * max|lambda|, 0) are clipped to 0 and counted.
/// The eigenvalue sum is checked against the trace to 1e-8 relative.
GramSpectrum eig_sym(const Eigen::MatrixXd& a);
GramSpectrum eig_sym(const Eigen::MatrixXd& a, int n_columns, MatrixKind kind);

/// (1/N) sum_k (lambda_k - z)^{-1}, Im z > 0.
std::complex<double> empirical_stieltjes(const GramSpectrum& spectrum, std::complex<double> z);

/// Right-continuous step CDF of the empirical spectral distribution.
struct EsdFunction {
  std::vector<double> sorted;  // ascending
  double operator()(double x) const;
};

EsdFunction esd(const GramSpectrum& spectrum);

/// sup_x |F_esd(x) - F_ref(x)| evaluated on both sides of every jump;
/// the reference must be monotone on the eigenvalue range.
double kolmogorov_distance(const EsdFunction& esd, const std::function<double(double)>& reference);

}  // namespace mixspec
