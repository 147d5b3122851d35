#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace mixspec {

enum class ProcessKind { harris_chain, doubling_map, noncausal_window, iid_baseline };
enum class Observable { signed_sqrt, centered_identity };

std::string to_string(ProcessKind kind);
std::string to_string(Observable obs);

/// Declarative description of a stationary process model.
///
/// Supported kinds:
///   harris_chain     sticky Markov chain on [-1,1] with kernel
///                    (1-|x|) delta_x + |x| nu, nu having density
///                    ((a+1)/2)|x|^a; observed through g(x) = sign(x)sqrt|x|.
///   doubling_map     x -> 2x mod 1 represented by a sliding window of 64
///                    i.i.d. Bernoulli(1/2) binary digits; observable x - 1/2.
///   noncausal_window X_k = sum_{|j|<=J} c_j g(eps_{k+j}) with eps i.i.d.
///                    uniform on [-1,1].
///   iid_baseline     X_k = sigma * standard normal.
struct ProcessSpec {
  ProcessKind kind = ProcessKind::iid_baseline;
  double a = 1.0;                      // Harris exponent, > 0
  std::vector<double> window_coeffs;   // c_{-J} .. c_{J}, odd length
  Observable observable = Observable::centered_identity;
  double sigma2 = 1.0;                 // iid baseline variance, > 0

  /// Throws ParameterError when the spec cannot yield a proper centered process.
  void validate() const;

  /// One-sided innovation window needed to evaluate X_k (J, 64 for the
  /// doubling map, 0 for instantaneous observables).
  long window() const;

  /// Half window J for the noncausal model.
  long half_window() const;

  nlohmann::json to_json() const;
  static ProcessSpec from_json(const nlohmann::json& j);
};

/// Convenience constructors mirroring the model catalogue.
ProcessSpec harris_spec(double a);
ProcessSpec doubling_spec();
ProcessSpec noncausal_spec(std::vector<double> coeffs, Observable obs);
ProcessSpec iid_spec(double sigma2);

/// A realized finite sample X_1..X_L together with the innovations that
/// produced it. Innovations cover indices 1-margin .. L+margin so that
/// windowed functionals near the edges are well-defined.
struct Trajectory {
  std::vector<double> values;       // X_1..X_L
  std::vector<double> innovations;  // eps_{1-margin}..eps_{L+margin}
  long margin = 0;
  std::uint64_t seed = 0;
  ProcessSpec spec;

  long length() const { return static_cast<long>(values.size()); }

  /// Innovation at absolute index k, k in [1-margin, L+margin].
  double eps(long k) const { return innovations[static_cast<std::size_t>(k - 1 + margin)]; }
};

/// Samples a stationary trajectory. Values are a pure function of
/// (spec, seed, L): enlarging the margin extends the innovation record
/// without changing X_1..X_L.
Trajectory sample_trajectory(const ProcessSpec& spec, long length, std::uint64_t seed,
                             long margin = -1);

/// Packed digit window b_{k+1}..b_{k+64} (MSB first) of a doubling-map
/// trajectory; X_k equals doubling_value(window).
std::uint64_t doubling_window(const Trajectory& traj, long k);
double doubling_value(std::uint64_t window);

/// g applied to one innovation (harris chain / noncausal term).
double observable_value(Observable obs, double eps);

enum class AutocovSource { closed_form, monte_carlo };

/// gamma_0..gamma_K with provenance.
struct AutocovarianceSeq {
  std::vector<double> gamma;
  AutocovSource source = AutocovSource::closed_form;
  bool summable = true;

  int max_lag() const { return static_cast<int>(gamma.size()) - 1; }

  /// gamma_0 > 0, |gamma_k| <= gamma_0, Toeplitz PSD (attempted Cholesky).
  void validate() const;
};

/// Exact autocovariances for the models with known analytics:
///   harris (signed_sqrt)  gamma_k = a * B(k+1, a+1)
///   doubling map          gamma_k = 2^{-k} / 12
///   iid                   gamma_0 = sigma2, gamma_k = 0
///   noncausal             gamma_k = Var(g(eps)) * sum_j c_j c_{j+k}
AutocovarianceSeq autocovariance_closed_form(const ProcessSpec& spec, int max_lag);

/// E(g(eps_k) | eps_0 = x0) = (1-|x0|)^k g(x0) for the Harris chain.
double conditional_expectation_harris(double x0, int k, double a);

/// Biased-normalization estimate gamma_k = (1/L) sum_t X_t X_{t+k};
/// requires L > 4K so the Toeplitz estimate is well conditioned.
AutocovarianceSeq estimate_autocovariance(const Trajectory& traj, int max_lag);

enum class BetaDecayClass { polynomial, exponential, zero };

/// Upper-bound model for the mixing coefficients: bound(n) is non-increasing
/// and tends to 0. The multiplier is configurable; bounds are capped at 1
/// and bound(0) = 1.
struct BetaDecayModel {
  BetaDecayClass decay = BetaDecayClass::zero;
  double rate = 0.0;      // a for polynomial, lambda for exponential
  double constant = 1.0;  // upper-bound multiplier

  double bound(double n) const;
};

BetaDecayModel beta_decay(const ProcessSpec& spec);

struct CondBetaDiagnostic {
  std::vector<double> partial_sums;  // partial sums at dyadic checkpoints 2^j
  bool converged = false;
};

/// Summability diagnostic for sum_n log(n)^{3 alpha/2} n^{-1/2} bound(n):
/// dyadic block increments must shrink geometrically over the tail of the
/// horizon. Polynomial decay passes for a > 1/2 at large horizons.
CondBetaDiagnostic check_cond_beta(const BetaDecayModel& model, double alpha, long horizon);

}  // namespace mixspec
