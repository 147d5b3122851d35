#include "mixspec/matrix_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Cholesky>

#include "mixspec/errors.hpp"
#include "mixspec/kernels.hpp"
#include "mixspec/rng.hpp"

namespace mixspec {

namespace {

constexpr std::uint64_t kStarStream = 3;

double clamp_M(double x, double M) { return std::min(std::max(x, -M), M); }

// Digits packed MSB-first; count <= 64, remaining low bits zero.
std::uint64_t pack_bits(const double* digits, long count) {
  std::uint64_t w = 0;
  for (long j = 0; j < 64; ++j) {
    w <<= 1;
    if (j < count && digits[j] != 0.0) w |= 1u;
  }
  return w;
}

// Centered truncated projection of X_k on its block innovations. `tuple`
// holds the p + 2m innovations of the block and `pos` locates eps_k inside
// it. The supported models are exactly those whose conditional expectation
// given the tuple has a closed form; every one of them is sign-symmetric, so
// the centering constant is 0 (the doubling map carries the exact -2^-65
// mean of its truncated digit expansion).
double blocked_entry(const ProcessSpec& spec, double M, const double* tuple, long tuple_len,
                     long pos) {
  switch (spec.kind) {
    case ProcessKind::harris_chain:
      return clamp_M(observable_value(spec.observable, tuple[pos]), M);
    case ProcessKind::iid_baseline:
      return clamp_M(std::sqrt(spec.sigma2) * tuple[pos], M);
    case ProcessKind::noncausal_window: {
      const long half = spec.half_window();
      double x = 0.0;
      for (long j = -half; j <= half; ++j) {
        const long q = pos + j;
        if (q < 0 || q >= tuple_len) continue;  // out-of-block terms have mean 0
        x += spec.window_coeffs[static_cast<std::size_t>(j + half)] *
             observable_value(spec.observable, tuple[q]);
      }
      return x;
    }
    case ProcessKind::doubling_map: {
      const long avail = std::min<long>(64, tuple_len - 1 - pos);
      const std::uint64_t w = pack_bits(tuple + pos + 1, avail);
      const double tail_mean = 0.5 * (std::ldexp(1.0, -static_cast<int>(avail)) - 0x1.0p-64);
      const double projected = static_cast<double>(w) * 0x1.0p-64 + tail_mean - 0.5;
      return projected + 0x1.0p-65;  // remove the exact mean of the projection
    }
  }
  return 0.0;
}

void require_blocked_support(const ProcessSpec& spec, double M) {
  switch (spec.kind) {
    case ProcessKind::harris_chain:
    case ProcessKind::iid_baseline:
      return;  // instantaneous: E(phi_M(X_k) | block) = phi_M(X_k)
    case ProcessKind::doubling_map:
      if (M < 0.5)
        throw UnsupportedModelError("doubling-map blocks need M >= 1/2 (|X| <= 1/2)");
      return;
    case ProcessKind::noncausal_window: {
      double l1 = 0.0;
      for (double c : spec.window_coeffs) l1 += std::abs(c);
      if (M < l1)
        throw UnsupportedModelError(
            "noncausal blocks need M >= sum|c_j| so the truncation never binds");
      return;
    }
  }
}

// Fresh draw of one stationary block innovation tuple.
std::vector<double> sample_block_tuple(const ProcessSpec& spec, long tuple_len, SplitMix& rng) {
  std::vector<double> tuple(static_cast<std::size_t>(tuple_len));
  switch (spec.kind) {
    case ProcessKind::harris_chain: {
      const double mag = std::pow(rng.uniform(), 1.0 / spec.a);
      double state = rng.uniform() < 0.5 ? -mag : mag;
      tuple[0] = state;
      for (long t = 1; t < tuple_len; ++t) {
        if (rng.uniform() >= 1.0 - std::abs(state)) {
          const double m = std::pow(rng.uniform(), 1.0 / (spec.a + 1.0));
          state = rng.uniform() < 0.5 ? -m : m;
        }
        tuple[static_cast<std::size_t>(t)] = state;
      }
      break;
    }
    case ProcessKind::doubling_map:
      for (auto& v : tuple) v = rng.uniform() < 0.5 ? 1.0 : 0.0;
      break;
    case ProcessKind::noncausal_window:
      for (auto& v : tuple) v = 2.0 * rng.uniform() - 1.0;
      break;
    case ProcessKind::iid_baseline:
      for (auto& v : tuple) v = rng.normal();
      break;
  }
  return tuple;
}

}  // namespace

void EnsembleConfig::validate() const {
  if (N < 2 || n < 2) throw ParameterError("ensemble needs N >= 2 and n >= 2");
}

Eigen::MatrixXd gram_of(const DataMatrix& data) { return kernels::gram(data.entries); }

bool BlockScheme::m_exceeds_proof_bound() const {
  return static_cast<double>(m) > std::sqrt(static_cast<double>(N)) / 2.0;
}

BlockScheme build_block_scheme(int N, int m, int a_m, double M) {
  if (m < 1 || a_m < 1) throw SchemeError("block scheme needs m >= 1 and a_m >= 1");
  if (!(M > 0.0)) throw SchemeError("truncation level M must be positive");
  const int p = a_m * m;
  const int stride = p + 3 * m;
  if (stride > N) throw SchemeError("block scheme needs p + 3m <= N");

  BlockScheme scheme;
  scheme.N = N;
  scheme.m = m;
  scheme.a_m = a_m;
  scheme.p = p;
  scheme.k_N = N / stride;
  scheme.M = M;
  for (int l = 1; l <= scheme.k_N; ++l) {
    const long base = static_cast<long>(l - 1) * stride;
    scheme.active.push_back({base + 1, base + p});
    scheme.gaps.push_back({base + p + 1, base + stride});
  }
  // tail gap, empty when k_N (p + 3m) = N
  scheme.gaps.push_back({static_cast<long>(scheme.k_N) * stride + 1, N});
  return scheme;
}

GramPair build_Bn(const Trajectory& traj, const EnsembleConfig& cfg) {
  cfg.validate();
  const long need = static_cast<long>(cfg.N) * cfg.n;
  if (traj.length() < need)
    throw InsufficientDataError("trajectory shorter than N*n");

  GramPair out;
  out.data.kind = MatrixKind::Bn_source;
  out.data.spec = traj.spec;
  out.data.seed = traj.seed;
  out.data.entries = Eigen::Map<const Eigen::MatrixXd>(traj.values.data(), cfg.N, cfg.n);
  out.gram = kernels::gram(out.data.entries);

  double energy = 0.0;
  for (long k = 0; k < need; ++k) energy += traj.values[static_cast<std::size_t>(k)] *
                                            traj.values[static_cast<std::size_t>(k)];
  const double lhs = out.gram.trace() / cfg.N;
  const double rhs = energy / static_cast<double>(need);
  if (std::abs(lhs - rhs) > 1e-10 * (1.0 + std::abs(rhs)))
    throw Error("Gram trace identity violated");
  return out;
}

Eigen::MatrixXd build_An(const ProcessSpec& spec, const EnsembleConfig& cfg, std::uint64_t seed) {
  spec.validate();
  cfg.validate();
  Eigen::MatrixXd x(cfg.N, cfg.n);
  for (int j = 0; j < cfg.n; ++j) {
    const Trajectory traj =
        sample_trajectory(spec, cfg.N, derive_stream(seed, static_cast<std::uint64_t>(j)));
    for (int i = 0; i < cfg.N; ++i) x(i, j) = traj.values[static_cast<std::size_t>(i)];
  }
  return kernels::gram(x);
}

Eigen::MatrixXd build_Gn(const AutocovarianceSeq& gamma, const EnsembleConfig& cfg,
                         std::uint64_t seed) {
  cfg.validate();
  gamma.validate();
  Eigen::MatrixXd cov(cfg.N, cfg.N);
  const int K = gamma.max_lag();
  for (int i = 0; i < cfg.N; ++i)
    for (int j = 0; j < cfg.N; ++j) {
      const int lag = std::abs(i - j);
      cov(i, j) = lag <= K ? gamma.gamma[static_cast<std::size_t>(lag)] : 0.0;
    }

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    cov.diagonal().array() += 1e-12 * gamma.gamma[0];
    llt.compute(cov);
    if (llt.info() != Eigen::Success)
      throw CovarianceError("Toeplitz covariance not PSD after regularization");
  }
  const Eigen::MatrixXd chol = llt.matrixL();
  return kernels::gram(kernels::gaussian_columns(chol, cfg.n, seed));
}

DataMatrix build_blocked_matrix(const Trajectory& traj, const BlockScheme& scheme,
                                const EnsembleConfig& cfg) {
  cfg.validate();
  if (scheme.N != cfg.N) throw SchemeError("block scheme built for a different N");
  require_blocked_support(traj.spec, scheme.M);
  const long need = static_cast<long>(cfg.N) * cfg.n;
  if (traj.length() < need) throw InsufficientDataError("trajectory shorter than N*n");
  if (traj.margin < scheme.m)
    throw InsufficientDataError("trajectory margin smaller than the block half-window m");

  DataMatrix out;
  out.kind = MatrixKind::blocked;
  out.spec = traj.spec;
  out.seed = traj.seed;
  out.block_m = scheme.m;
  out.block_a_m = scheme.a_m;
  out.block_M = scheme.M;
  out.entries = Eigen::MatrixXd::Zero(cfg.N, cfg.n);

  const long tuple_len = scheme.p + 2L * scheme.m;
  std::vector<double> tuple(static_cast<std::size_t>(tuple_len));
  for (int col = 0; col < cfg.n; ++col) {
    const long col_base = static_cast<long>(col) * cfg.N;  // global index offset
    for (const auto& block : scheme.active) {
      const long tuple_lo = col_base + block.lo - scheme.m;
      for (long t = 0; t < tuple_len; ++t) tuple[static_cast<std::size_t>(t)] = traj.eps(tuple_lo + t);
      for (long k = block.lo; k <= block.hi; ++k) {
        const long pos = scheme.m + (k - block.lo);
        out.entries(k - 1, col) =
            blocked_entry(traj.spec, scheme.M, tuple.data(), tuple_len, pos);
      }
    }
  }
  return out;
}

DataMatrix resample_independent_blocks(const ProcessSpec& spec, const BlockScheme& scheme,
                                       const EnsembleConfig& cfg, std::uint64_t seed) {
  spec.validate();
  cfg.validate();
  require_blocked_support(spec, scheme.M);

  DataMatrix out;
  out.kind = MatrixKind::blocked_star;
  out.spec = spec;
  out.seed = seed;
  out.block_m = scheme.m;
  out.block_a_m = scheme.a_m;
  out.block_M = scheme.M;
  out.entries = Eigen::MatrixXd::Zero(cfg.N, cfg.n);

  const long tuple_len = scheme.p + 2L * scheme.m;
  const std::uint64_t star_key = derive_stream(seed, kStarStream);
  for (int col = 0; col < cfg.n; ++col) {
    for (std::size_t l = 0; l < scheme.active.size(); ++l) {
      const auto& block = scheme.active[l];
      const std::uint64_t block_index =
          static_cast<std::uint64_t>(col) * scheme.active.size() + l;
      SplitMix rng(derive_stream(star_key, block_index));
      const std::vector<double> tuple = sample_block_tuple(spec, tuple_len, rng);
      for (long k = block.lo; k <= block.hi; ++k) {
        const long pos = scheme.m + (k - block.lo);
        out.entries(k - 1, col) =
            blocked_entry(spec, scheme.M, tuple.data(), tuple_len, pos);
      }
    }
  }
  return out;
}

PerturbationBound stieltjes_perturbation_bound(const Eigen::MatrixXd& a,
                                               const Eigen::MatrixXd& b,
                                               std::complex<double> z) {
  if (!(z.imag() > 0.0)) throw DomainError("perturbation bound needs Im z > 0");
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("perturbation bound needs equal shapes");

  const long N = a.rows();
  const long n = a.cols();
  const Eigen::MatrixXd ga = kernels::gram(a);
  const Eigen::MatrixXd gb = kernels::gram(b);
  const std::complex<double> sa = empirical_stieltjes(eig_sym(ga), z);
  const std::complex<double> sb = empirical_stieltjes(eig_sym(gb), z);

  PerturbationBound out;
  out.lhs = std::abs(sa - sb);
  const double v = z.imag();
  const double trace_sum = std::abs(ga.trace() + gb.trace());
  const double diff_energy = (a - b).squaredNorm() / static_cast<double>(n);
  out.rhs = std::sqrt(2.0) / (static_cast<double>(N) * v * v) * std::sqrt(trace_sum) *
            std::sqrt(diff_energy);
  return out;
}

}  // namespace mixspec
