// Serial reference vs OpenMP kernels on ensemble-sized inputs.
#include <benchmark/benchmark.h>

#include "mixspec/kernels.hpp"
#include "mixspec/lsd.hpp"
#include "mixspec/matrix_lab.hpp"
#include "mixspec/process.hpp"

namespace {

using namespace mixspec;

Eigen::MatrixXd demo_matrix(int rows, int cols) {
  const Trajectory traj = sample_trajectory(harris_spec(1.0), static_cast<long>(rows) * cols, 7);
  return Eigen::Map<const Eigen::MatrixXd>(traj.values.data(), rows, cols);
}

void bm_gram_serial(benchmark::State& state) {
  const auto x = demo_matrix(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::gram_serial(x));
}

void bm_gram_omp(benchmark::State& state) {
  const auto x = demo_matrix(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::gram(x));
}

void bm_gaussian_columns_serial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd chol = Eigen::MatrixXd::Identity(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::gaussian_columns_serial(chol, n, 11));
}

void bm_gaussian_columns_omp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd chol = Eigen::MatrixXd::Identity(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::gaussian_columns(chol, n, 11));
}

void bm_stieltjes_serial(benchmark::State& state) {
  std::vector<double> eigs(400);
  for (std::size_t i = 0; i < eigs.size(); ++i) eigs[i] = 4.0 * static_cast<double>(i) / eigs.size();
  std::vector<std::complex<double>> zs(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < zs.size(); ++i) zs[i] = {0.01 * static_cast<double>(i), 1e-3};
  for (auto _ : state) benchmark::DoNotOptimize(kernels::stieltjes_batch_serial(eigs, zs));
}

void bm_stieltjes_omp(benchmark::State& state) {
  std::vector<double> eigs(400);
  for (std::size_t i = 0; i < eigs.size(); ++i) eigs[i] = 4.0 * static_cast<double>(i) / eigs.size();
  std::vector<std::complex<double>> zs(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < zs.size(); ++i) zs[i] = {0.01 * static_cast<double>(i), 1e-3};
  for (auto _ : state) benchmark::DoNotOptimize(kernels::stieltjes_batch(eigs, zs));
}

void bm_autocov_serial(benchmark::State& state) {
  const Trajectory traj = sample_trajectory(harris_spec(1.0), state.range(0), 13);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::autocovariance_serial(traj.values, 64));
}

void bm_autocov_omp(benchmark::State& state) {
  const Trajectory traj = sample_trajectory(harris_spec(1.0), state.range(0), 13);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::autocovariance(traj.values, 64));
}

}  // namespace

BENCHMARK(bm_gram_serial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_gram_omp)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_gaussian_columns_serial)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_gaussian_columns_omp)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_stieltjes_serial)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_stieltjes_omp)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_autocov_serial)->Arg(200000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_autocov_omp)->Arg(200000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
