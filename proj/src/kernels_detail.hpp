#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mixspec::kernels::detail {

// Per-element work shared by the serial and OpenMP kernel flavors. Keeping a
// single definition of the element order is what makes the two flavors
// bit-for-bit identical.

void gram_column(const double* x, long rows, long cols, long j, double* out);
void finish_gram(Eigen::MatrixXd& b, long n);
void gaussian_column(const Eigen::MatrixXd& chol, std::uint64_t seed, long j, double* out);
std::complex<double> stieltjes_point(std::span<const double> eigenvalues, std::complex<double> z);
double autocovariance_lag(std::span<const double> x, long lag);

}  // namespace mixspec::kernels::detail
