#include <complex>
#include <cstdint>

#include <omp.h>

#include "kernels_detail.hpp"
#include "mixspec/kernels.hpp"

namespace mixspec::kernels {

Eigen::MatrixXd gram(const Eigen::MatrixXd& x) {
  const long rows = x.rows();
  Eigen::MatrixXd b(rows, rows);
  // strips shrink with j, so dynamic scheduling balances the triangle
#pragma omp parallel for schedule(dynamic, 8)
  for (long j = 0; j < rows; ++j) detail::gram_column(x.data(), rows, x.cols(), j, b.data());
  detail::finish_gram(b, x.cols());
  return b;
}

Eigen::MatrixXd gaussian_columns(const Eigen::MatrixXd& chol, int n, std::uint64_t seed) {
  const long rows = chol.rows();
  Eigen::MatrixXd z(rows, n);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < n; ++j) detail::gaussian_column(chol, seed, j, z.data() + j * rows);
  return z;
}

std::vector<std::complex<double>> stieltjes_batch(std::span<const double> eigenvalues,
                                                  std::span<const std::complex<double>> zs) {
  std::vector<std::complex<double>> out(zs.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(zs.size()); ++i)
    out[static_cast<std::size_t>(i)] = detail::stieltjes_point(eigenvalues, zs[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<double> autocovariance(std::span<const double> x, int max_lag) {
  std::vector<double> gamma(static_cast<std::size_t>(max_lag) + 1);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k <= max_lag; ++k)
    gamma[static_cast<std::size_t>(k)] = detail::autocovariance_lag(x, k);
  return gamma;
}

}  // namespace mixspec::kernels
