#include "mixspec/process.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "mixspec/errors.hpp"
#include "mixspec/kernels.hpp"
#include "mixspec/rng.hpp"

namespace mixspec {

namespace {

constexpr long kDoublingDigits = 64;

// Innovation streams per trajectory seed.
constexpr std::uint64_t kChainStream = 1;
constexpr std::uint64_t kInitStream = 2;

std::uint64_t chain_counter(long k, int slot) {
  return static_cast<std::uint64_t>(k) * 4 + static_cast<std::uint64_t>(slot);
}

double signum(double x) { return (x > 0.0) - (x < 0.0); }

// One transition of the sticky kernel (1-|x|) delta_x + |x| nu, with nu
// sampled through |y| = U^{1/(a+1)} and a random sign. The same kernel serves
// the backward extension: the chain is reversible with respect to pi.
double harris_step(double state, double a, std::uint64_t key, long target_index) {
  const double u_move = uniform_at(key, chain_counter(target_index, 0));
  if (u_move < 1.0 - std::abs(state)) return state;
  const double u_mag = uniform_at(key, chain_counter(target_index, 1));
  const double u_sign = uniform_at(key, chain_counter(target_index, 2));
  const double mag = std::pow(u_mag, 1.0 / (a + 1.0));
  return u_sign < 0.5 ? -mag : mag;
}

double harris_stationary_draw(double a, std::uint64_t key) {
  // |eps| = U^{1/a} under pi(dx) = (a/2)|x|^{a-1} dx on [-1,1]
  const double mag = std::pow(uniform_at(key, 0), 1.0 / a);
  return uniform_at(key, 1) < 0.5 ? -mag : mag;
}

bool doubling_digit(std::uint64_t key, long index) {
  return uniform_at(key, static_cast<std::uint64_t>(index)) < 0.5;
}

std::uint64_t pack_window(const Trajectory& traj, long k) {
  std::uint64_t w = 0;
  for (long j = 1; j <= kDoublingDigits; ++j) {
    w <<= 1;
    if (traj.eps(k + j) != 0.0) w |= 1u;
  }
  return w;
}

}  // namespace

std::string to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::harris_chain: return "harris_chain";
    case ProcessKind::doubling_map: return "doubling_map";
    case ProcessKind::noncausal_window: return "noncausal_window";
    case ProcessKind::iid_baseline: return "iid_baseline";
  }
  return "unknown";
}

std::string to_string(Observable obs) {
  return obs == Observable::signed_sqrt ? "signed_sqrt" : "centered_identity";
}

void ProcessSpec::validate() const {
  switch (kind) {
    case ProcessKind::harris_chain:
      if (!(a > 0.0) || !std::isfinite(a))
        throw ParameterError("harris_chain requires a > 0");
      break;
    case ProcessKind::doubling_map:
      if (observable != Observable::centered_identity)
        throw ParameterError("doubling_map supports the centered identity observable only");
      break;
    case ProcessKind::noncausal_window: {
      if (window_coeffs.empty() || window_coeffs.size() % 2 == 0)
        throw ParameterError("noncausal_window needs coefficients c_{-J}..c_J (odd count)");
      bool any = false;
      for (double c : window_coeffs) {
        if (!std::isfinite(c)) throw ParameterError("non-finite window coefficient");
        any = any || c != 0.0;
      }
      if (!any) throw ParameterError("noncausal_window needs at least one nonzero coefficient");
      break;
    }
    case ProcessKind::iid_baseline:
      if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw ParameterError("iid_baseline requires sigma2 > 0");
      if (observable != Observable::centered_identity)
        throw ParameterError("iid_baseline uses the centered identity observable");
      break;
  }
}

long ProcessSpec::window() const {
  switch (kind) {
    case ProcessKind::doubling_map: return kDoublingDigits;
    case ProcessKind::noncausal_window: return half_window();
    default: return 0;
  }
}

long ProcessSpec::half_window() const {
  return kind == ProcessKind::noncausal_window
             ? static_cast<long>(window_coeffs.size() / 2)
             : 0;
}

nlohmann::json ProcessSpec::to_json() const {
  return nlohmann::json{{"kind", to_string(kind)},
                        {"a", a},
                        {"window_coeffs", window_coeffs},
                        {"observable", to_string(observable)},
                        {"sigma2", sigma2}};
}

ProcessSpec ProcessSpec::from_json(const nlohmann::json& j) {
  ProcessSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "harris_chain") spec.kind = ProcessKind::harris_chain;
  else if (kind == "doubling_map") spec.kind = ProcessKind::doubling_map;
  else if (kind == "noncausal_window") spec.kind = ProcessKind::noncausal_window;
  else if (kind == "iid_baseline") spec.kind = ProcessKind::iid_baseline;
  else throw ParameterError("unknown process kind: " + kind);

  spec.observable = spec.kind == ProcessKind::harris_chain ? Observable::signed_sqrt
                                                           : Observable::centered_identity;
  if (j.contains("a")) spec.a = j.at("a").get<double>();
  if (j.contains("window_coeffs")) spec.window_coeffs = j.at("window_coeffs").get<std::vector<double>>();
  if (j.contains("sigma2")) spec.sigma2 = j.at("sigma2").get<double>();
  if (j.contains("observable")) {
    const std::string obs = j.at("observable").get<std::string>();
    if (obs == "signed_sqrt") spec.observable = Observable::signed_sqrt;
    else if (obs == "centered_identity") spec.observable = Observable::centered_identity;
    else throw ParameterError("unknown observable: " + obs);
  }
  spec.validate();
  return spec;
}

ProcessSpec harris_spec(double a) {
  ProcessSpec s;
  s.kind = ProcessKind::harris_chain;
  s.a = a;
  s.observable = Observable::signed_sqrt;
  return s;
}

ProcessSpec doubling_spec() {
  ProcessSpec s;
  s.kind = ProcessKind::doubling_map;
  return s;
}

ProcessSpec noncausal_spec(std::vector<double> coeffs, Observable obs) {
  ProcessSpec s;
  s.kind = ProcessKind::noncausal_window;
  s.window_coeffs = std::move(coeffs);
  s.observable = obs;
  return s;
}

ProcessSpec iid_spec(double sigma2) {
  ProcessSpec s;
  s.kind = ProcessKind::iid_baseline;
  s.sigma2 = sigma2;
  return s;
}

double observable_value(Observable obs, double eps) {
  return obs == Observable::signed_sqrt ? signum(eps) * std::sqrt(std::abs(eps)) : eps;
}

Trajectory sample_trajectory(const ProcessSpec& spec, long length, std::uint64_t seed,
                             long margin) {
  spec.validate();
  if (length < 1) throw DomainError("trajectory length must be at least 1");
  if (margin < spec.window()) margin = spec.window();

  Trajectory traj;
  traj.spec = spec;
  traj.seed = seed;
  traj.margin = margin;
  traj.innovations.resize(static_cast<std::size_t>(length + 2 * margin));

  const std::uint64_t key = derive_stream(seed, kChainStream);
  const long lo = 1 - margin;
  const long hi = length + margin;
  auto put = [&](long k, double v) { traj.innovations[static_cast<std::size_t>(k - lo)] = v; };

  switch (spec.kind) {
    case ProcessKind::harris_chain: {
      // Anchor the chain at index 1 so X_1..X_L do not depend on the margin;
      // the left extension runs the same kernel backward (reversibility).
      const double eps1 = harris_stationary_draw(spec.a, derive_stream(seed, kInitStream));
      put(1, eps1);
      double state = eps1;
      for (long k = 0; k >= lo; --k) {
        state = harris_step(state, spec.a, key, k);
        put(k, state);
      }
      state = eps1;
      for (long k = 2; k <= hi; ++k) {
        state = harris_step(state, spec.a, key, k);
        put(k, state);
      }
      break;
    }
    case ProcessKind::doubling_map:
      for (long k = lo; k <= hi; ++k) put(k, doubling_digit(key, k) ? 1.0 : 0.0);
      break;
    case ProcessKind::noncausal_window:
      for (long k = lo; k <= hi; ++k) put(k, 2.0 * uniform_at(key, static_cast<std::uint64_t>(k)) - 1.0);
      break;
    case ProcessKind::iid_baseline:
      for (long k = lo; k <= hi; ++k) put(k, normal_at(key, static_cast<std::uint64_t>(k)));
      break;
  }

  traj.values.resize(static_cast<std::size_t>(length));
  const double sigma = std::sqrt(spec.sigma2);
  const long half = spec.half_window();
  for (long k = 1; k <= length; ++k) {
    double x = 0.0;
    switch (spec.kind) {
      case ProcessKind::harris_chain:
        x = observable_value(spec.observable, traj.eps(k));
        break;
      case ProcessKind::doubling_map:
        x = doubling_value(pack_window(traj, k));
        break;
      case ProcessKind::noncausal_window:
        for (long j = -half; j <= half; ++j)
          x += spec.window_coeffs[static_cast<std::size_t>(j + half)] *
               observable_value(spec.observable, traj.eps(k + j));
        break;
      case ProcessKind::iid_baseline:
        x = sigma * traj.eps(k);
        break;
    }
    traj.values[static_cast<std::size_t>(k - 1)] = x;
  }
  return traj;
}

std::uint64_t doubling_window(const Trajectory& traj, long k) {
  if (traj.spec.kind != ProcessKind::doubling_map)
    throw UnsupportedModelError("digit windows exist for the doubling map only");
  return pack_window(traj, k);
}

double doubling_value(std::uint64_t window) {
  return static_cast<double>(window) * 0x1.0p-64 - 0.5;
}

void AutocovarianceSeq::validate() const {
  if (gamma.empty()) throw ParameterError("empty autocovariance sequence");
  const double g0 = gamma[0];
  if (!(g0 > 0.0)) throw ParameterError("gamma_0 must be positive");
  for (double g : gamma)
    if (!std::isfinite(g) || std::abs(g) > g0 * (1.0 + 1e-12))
      throw ParameterError("|gamma_k| must not exceed gamma_0");

  // PSD guard: attempted Cholesky of the leading Toeplitz block.
  const int m = std::min<int>(static_cast<int>(gamma.size()), 256);
  Eigen::MatrixXd t(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) t(i, j) = gamma[static_cast<std::size_t>(std::abs(i - j))];
  t.diagonal().array() += 1e-10 * g0;
  if (Eigen::LLT<Eigen::MatrixXd>(t).info() != Eigen::Success)
    throw ParameterError("autocovariance sequence is not positive semi-definite");
}

AutocovarianceSeq autocovariance_closed_form(const ProcessSpec& spec, int max_lag) {
  spec.validate();
  if (max_lag < 0) throw ParameterError("max lag must be non-negative");

  AutocovarianceSeq seq;
  seq.source = AutocovSource::closed_form;
  seq.summable = true;
  seq.gamma.resize(static_cast<std::size_t>(max_lag) + 1);

  switch (spec.kind) {
    case ProcessKind::harris_chain: {
      if (spec.observable != Observable::signed_sqrt)
        throw UnsupportedModelError(
            "closed-form harris autocovariances exist for the signed_sqrt observable only");
      // gamma_k = a * B(k+1, a+1), via log-gamma for large lags
      const double a = spec.a;
      for (int k = 0; k <= max_lag; ++k)
        seq.gamma[static_cast<std::size_t>(k)] =
            a * std::exp(std::lgamma(k + 1.0) + std::lgamma(a + 1.0) - std::lgamma(k + a + 2.0));
      break;
    }
    case ProcessKind::doubling_map:
      for (int k = 0; k <= max_lag; ++k)
        seq.gamma[static_cast<std::size_t>(k)] = std::ldexp(1.0 / 12.0, -k);
      break;
    case ProcessKind::iid_baseline:
      seq.gamma.assign(static_cast<std::size_t>(max_lag) + 1, 0.0);
      seq.gamma[0] = spec.sigma2;
      break;
    case ProcessKind::noncausal_window: {
      const double v = spec.observable == Observable::signed_sqrt ? 0.5 : 1.0 / 3.0;
      const auto& c = spec.window_coeffs;
      const int len = static_cast<int>(c.size());
      for (int k = 0; k <= max_lag; ++k) {
        double s = 0.0;
        for (int j = 0; j + k < len; ++j) s += c[static_cast<std::size_t>(j)] * c[static_cast<std::size_t>(j + k)];
        seq.gamma[static_cast<std::size_t>(k)] = v * s;
      }
      break;
    }
  }
  seq.validate();
  return seq;
}

double conditional_expectation_harris(double x0, int k, double a) {
  if (!(a > 0.0)) throw ParameterError("harris exponent a must be positive");
  if (std::abs(x0) > 1.0) throw DomainError("harris state must lie in [-1,1]");
  if (k < 0) throw DomainError("lag must be non-negative");
  return std::pow(1.0 - std::abs(x0), k) * observable_value(Observable::signed_sqrt, x0);
}

AutocovarianceSeq estimate_autocovariance(const Trajectory& traj, int max_lag) {
  if (max_lag < 0) throw ParameterError("max lag must be non-negative");
  if (traj.length() <= 4 * static_cast<long>(max_lag))
    throw InsufficientDataError("autocovariance estimate needs L > 4K");
  AutocovarianceSeq seq;
  seq.gamma = kernels::autocovariance(traj.values, max_lag);
  seq.source = AutocovSource::monte_carlo;
  seq.summable = true;
  if (seq.gamma[0] > 0.0) seq.validate();  // all-zero trajectories skip the PSD guard
  return seq;
}

double BetaDecayModel::bound(double n) const {
  if (n <= 0.0) return 1.0;
  double b = 0.0;
  switch (decay) {
    case BetaDecayClass::zero: return 0.0;
    case BetaDecayClass::polynomial: b = constant * std::pow(n, -rate); break;
    case BetaDecayClass::exponential: b = constant * std::exp(-rate * n); break;
  }
  return std::min(1.0, b);
}

BetaDecayModel beta_decay(const ProcessSpec& spec) {
  spec.validate();
  BetaDecayModel model;
  switch (spec.kind) {
    case ProcessKind::harris_chain:
      model.decay = BetaDecayClass::polynomial;
      model.rate = spec.a;
      break;
    case ProcessKind::doubling_map:
      // the digit representation forgets at rate 2^{-n}
      model.decay = BetaDecayClass::exponential;
      model.rate = std::log(2.0);
      break;
    case ProcessKind::noncausal_window:
    case ProcessKind::iid_baseline:
      model.decay = BetaDecayClass::zero;
      break;
  }
  return model;
}

CondBetaDiagnostic check_cond_beta(const BetaDecayModel& model, double alpha, long horizon) {
  if (!(alpha > 1.0)) throw ParameterError("cond-beta requires alpha > 1");
  if (horizon < 10) throw ParameterError("cond-beta horizon must be at least 10");

  auto term = [&](long n) {
    if (n < 2) return 0.0;
    const double ln = std::log(static_cast<double>(n));
    return std::pow(ln, 1.5 * alpha) * model.bound(static_cast<double>(n)) /
           std::sqrt(static_cast<double>(n));
  };

  CondBetaDiagnostic diag;
  double sum = 0.0;
  long next_checkpoint = 1;
  for (long n = 1; n <= horizon; ++n) {
    sum += term(n);
    if (n == next_checkpoint || n == horizon) {
      diag.partial_sums.push_back(sum);
      if (n == next_checkpoint) next_checkpoint *= 2;
    }
  }

  // Condensation-style test: increments over complete dyadic blocks must
  // shrink geometrically across the tail of the horizon.
  std::vector<double> increments;
  for (std::size_t j = 0; j + 1 < diag.partial_sums.size(); ++j) {
    const double d = diag.partial_sums[j + 1] - diag.partial_sums[j];
    increments.push_back(d);
  }
  if (increments.size() >= 4) increments.pop_back();  // last block may be partial

  if (increments.empty() || increments.back() == 0.0) {
    diag.converged = true;  // finitely many nonzero terms
    return diag;
  }
  const std::size_t tail = std::min<std::size_t>(3, increments.size() - 1);
  bool ok = tail > 0;
  for (std::size_t j = increments.size() - tail; j < increments.size(); ++j) {
    const double prev = increments[j - 1];
    if (!(prev > 0.0) || increments[j] / prev >= 0.999) ok = false;
  }
  diag.converged = ok;
  return diag;
}

}  // namespace mixspec
