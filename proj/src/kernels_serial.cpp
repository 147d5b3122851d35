#include <complex>
#include <cstdint>

#include "kernels_detail.hpp"
#include "mixspec/kernels.hpp"
#include "mixspec/rng.hpp"

namespace mixspec::kernels {

namespace detail {

// Lower triangle of X X^T accumulated column-strip by column-strip; the
// OpenMP flavor parallelizes over j with the identical inner order.
void gram_column(const double* x, long rows, long cols, long j, double* out) {
  double* bj = out + j * rows;
  for (long i = j; i < rows; ++i) bj[i] = 0.0;
  for (long k = 0; k < cols; ++k) {
    const double* xk = x + k * rows;
    const double xjk = xk[j];
    if (xjk == 0.0) continue;
    for (long i = j; i < rows; ++i) bj[i] += xk[i] * xjk;
  }
}

void finish_gram(Eigen::MatrixXd& b, long n) {
  const long rows = b.rows();
  const double inv = 1.0 / static_cast<double>(n);
  for (long j = 0; j < rows; ++j) {
    for (long i = j; i < rows; ++i) {
      const double v = b(i, j) * inv;
      b(i, j) = v;
      b(j, i) = v;
    }
  }
}

void gaussian_column(const Eigen::MatrixXd& chol, std::uint64_t seed, long j, double* out) {
  const long rows = chol.rows();
  SplitMix rng(derive_stream(seed, static_cast<std::uint64_t>(j)));
  std::vector<double> w(static_cast<std::size_t>(rows));
  for (long i = 0; i < rows; ++i) w[static_cast<std::size_t>(i)] = rng.normal();
  for (long i = 0; i < rows; ++i) out[i] = 0.0;
  const double* l = chol.data();
  for (long k = 0; k < rows; ++k) {
    const double wk = w[static_cast<std::size_t>(k)];
    const double* lk = l + k * rows;
    for (long i = k; i < rows; ++i) out[i] += lk[i] * wk;
  }
}

std::complex<double> stieltjes_point(std::span<const double> eigenvalues,
                                     std::complex<double> z) {
  std::complex<double> sum{0.0, 0.0};
  for (double lambda : eigenvalues) sum += 1.0 / (std::complex<double>(lambda) - z);
  return sum / static_cast<double>(eigenvalues.size());
}

double autocovariance_lag(std::span<const double> x, long lag) {
  const long n = static_cast<long>(x.size());
  double sum = 0.0;
  for (long t = 0; t + lag < n; ++t)
    sum += x[static_cast<std::size_t>(t)] * x[static_cast<std::size_t>(t + lag)];
  return sum / static_cast<double>(n);
}

}  // namespace detail

Eigen::MatrixXd gram_serial(const Eigen::MatrixXd& x) {
  const long rows = x.rows();
  Eigen::MatrixXd b(rows, rows);
  for (long j = 0; j < rows; ++j) detail::gram_column(x.data(), rows, x.cols(), j, b.data());
  detail::finish_gram(b, x.cols());
  return b;
}

Eigen::MatrixXd gaussian_columns_serial(const Eigen::MatrixXd& chol, int n, std::uint64_t seed) {
  const long rows = chol.rows();
  Eigen::MatrixXd z(rows, n);
  for (long j = 0; j < n; ++j) detail::gaussian_column(chol, seed, j, z.data() + j * rows);
  return z;
}

std::vector<std::complex<double>> stieltjes_batch_serial(
    std::span<const double> eigenvalues, std::span<const std::complex<double>> zs) {
  std::vector<std::complex<double>> out(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) out[i] = detail::stieltjes_point(eigenvalues, zs[i]);
  return out;
}

std::vector<double> autocovariance_serial(std::span<const double> x, int max_lag) {
  std::vector<double> gamma(static_cast<std::size_t>(max_lag) + 1);
  for (int k = 0; k <= max_lag; ++k)
    gamma[static_cast<std::size_t>(k)] = detail::autocovariance_lag(x, k);
  return gamma;
}

}  // namespace mixspec::kernels
