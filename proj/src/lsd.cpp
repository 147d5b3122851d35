#include "mixspec/lsd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mixspec/errors.hpp"
#include "mixspec/parallel.hpp"

namespace mixspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using cplx = std::complex<double>;

// Nodes w_q = 2 pi f(lambda_q) on the uniform grid; for a periodic integrand
// the trapezoid rule collapses to a plain average over the nodes.
std::vector<double> quad_nodes(const SpectralDensityFn& f, int q_count) {
  std::vector<double> w(static_cast<std::size_t>(q_count));
  for (int q = 0; q < q_count; ++q)
    w[static_cast<std::size_t>(q)] = kTwoPi * f(kTwoPi * q / q_count);
  return w;
}

// J(Su) = (c/2pi) Int 2pi f / (1 + 2pi f Su) and its derivative, fused;
// the integrand form stays finite where f vanishes.
struct Quadrature {
  cplx j;
  cplx jp;
};

Quadrature integrate(const std::vector<double>& w, double c, cplx su) {
  cplx j{0.0, 0.0}, jp{0.0, 0.0};
  for (double wq : w) {
    const cplx d = 1.0 + wq * su;
    j += wq / d;
    jp += (wq * wq) / (d * d);
  }
  const double scale = c / static_cast<double>(w.size());
  return {scale * j, -scale * jp};
}

double residual_of(cplx z, cplx su, cplx j) { return std::abs(z - (-1.0 / su + j)); }

StieltjesPoint solve_at_height(const std::vector<double>& w, double c, cplx z, cplx su0,
                               const SolverOptions& opts, int budget) {
  const double target = opts.tol * (1.0 + std::abs(z));
  cplx su = su0;
  if (!(su.imag() > 0.0)) su = -1.0 / z;

  std::vector<double> residuals;
  double eta = 1.0;
  double prev_step = std::numeric_limits<double>::infinity();
  int grow = 0, stable = 0;

  Quadrature q = integrate(w, c, su);
  for (int it = 0; it < budget; ++it) {
    const double residual = residual_of(z, su, q.j);
    residuals.push_back(residual);
    if (residual <= target) {
      StieltjesPoint point;
      point.z = z;
      point.Su = su;
      point.S = (su + (1.0 - c) / z) / c;
      point.iterations = it;
      point.residual = residual;
      if (!(point.Su.imag() > 0.0) || !(point.S.imag() > 0.0))
        throw SolverError("converged outside the upper half-plane", residuals);
      return point;
    }

    const cplx map = -1.0 / (z - q.j);
    const cplx step = map - su;

    // damped fixed-point candidate
    cplx fp = su + eta * step;
    int halvings = 0;
    while (!(fp.imag() > 0.0) && halvings < 60) {
      eta *= 0.5;
      fp = su + eta * step;
      ++halvings;
      grow = 0;
      stable = 0;
    }
    if (!(fp.imag() > 0.0))
      throw SolverError("damping could not keep Im Su positive", residuals);

    cplx next = fp;
    Quadrature q_next = integrate(w, c, fp);
    double r_next = residual_of(z, fp, q_next.j);

    // Newton candidate on the master relation -1/Su + J(Su) = z, whose
    // derivative stays O(1) inside the bulk as Im z -> 0 while the plain
    // iteration turns neutrally stable there; it is taken only when it
    // beats the damped step and stays in the upper half-plane.
    const cplx g = (-1.0 / su + q.j) - z;
    const cplx gp = 1.0 / (su * su) + q.jp;
    if (gp != cplx{0.0, 0.0}) {
      const cplx newton = su - g / gp;
      if (std::isfinite(newton.real()) && std::isfinite(newton.imag()) &&
          newton.imag() > 0.0) {
        const Quadrature q_newton = integrate(w, c, newton);
        const double r_newton = residual_of(z, newton, q_newton.j);
        if (r_newton < r_next) {
          next = newton;
          q_next = q_newton;
          r_next = r_newton;
        }
      }
    }

    const double step_norm = std::abs(step);
    if (step_norm > prev_step) {
      if (++grow >= 2) {
        eta *= 0.5;
        grow = 0;
        stable = 0;
      }
    } else {
      grow = 0;
      if (++stable >= 20) {  // slow recovery so damping cannot stall the solve
        eta = std::min(1.0, 2.0 * eta);
        stable = 0;
      }
    }
    prev_step = step_norm;
    su = next;
    q = q_next;
  }

  if (residuals.size() > 32) residuals.erase(residuals.begin(), residuals.end() - 32);
  throw SolverError("fixed-point iteration did not converge", residuals);
}

// Driver: a direct solve when a useful guess is available, otherwise
// continuation in the imaginary height. The iteration contracts well high
// above the real axis, and each level hands its solution down as the next
// starting point, so small target heights stay affordable.
StieltjesPoint solve_point(const std::vector<double>& w, double c, cplx z, cplx su0,
                           const SolverOptions& opts) {
  if (!(z.imag() > 0.0)) throw DomainError("fixed-point solve needs Im z > 0");
  if (!(c > 0.0)) throw ParameterError("aspect ratio c must be positive");

  int spent = 0;
  if (su0.imag() > 0.0) {
    try {
      const int budget = std::min(opts.max_iter, 500);
      StieltjesPoint point = solve_at_height(w, c, z, su0, opts, budget);
      return point;
    } catch (const SolverError&) {
      spent += std::min(opts.max_iter, 500);
    }
  }

  std::vector<double> heights;
  for (double v = std::max(1.0, z.imag()); v > z.imag(); v *= 0.25) heights.push_back(v);
  heights.push_back(z.imag());

  cplx guess = -1.0 / cplx(z.real(), heights.front());
  StieltjesPoint point;
  for (std::size_t level = 0; level < heights.size(); ++level) {
    const cplx zl(z.real(), heights[level]);
    point = solve_at_height(w, c, zl, guess, opts, opts.max_iter);
    spent += point.iterations;
    guess = point.Su;
  }
  point.iterations = spent;  // total work across levels
  return point;
}

}  // namespace

SpectralDensityFn SpectralDensityFn::from_autocov(const AutocovarianceSeq& seq) {
  seq.validate();
  if (!seq.summable)
    throw UnsupportedModelError("non-summable autocovariances are out of scope");

  SpectralDensityFn f;
  f.gamma_ = seq.gamma;
  f.gamma0_ = seq.gamma[0];

  // validation sweep on the raw series: values below -1e-8 gamma_0 mean the
  // truncation order is too low; anything milder is clamped at evaluation
  const int grid = 8192;
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i <= grid / 2; ++i) {  // f is symmetric about pi
    const double value = f.raw_value(kTwoPi * i / grid);
    lo = std::min(lo, value);
    hi = std::max(hi, value);
  }
  if (lo < -1e-8 * f.gamma0_)
    throw ParameterError("cosine series dips negative: increase the truncation order");
  f.max_value_ = hi;
  return f;
}

SpectralDensityFn SpectralDensityFn::constant(double value) {
  if (value < 0.0) throw ParameterError("a spectral density cannot be negative");
  SpectralDensityFn f;
  f.gamma_ = {kTwoPi * value};
  f.gamma0_ = kTwoPi * value;
  f.max_value_ = value;
  return f;
}

double SpectralDensityFn::raw_value(double lambda) const {
  double s = gamma_[0];
  for (std::size_t k = 1; k < gamma_.size(); ++k)
    s += 2.0 * gamma_[k] * std::cos(static_cast<double>(k) * lambda);
  return s / kTwoPi;
}

double SpectralDensityFn::operator()(double lambda) const {
  const double value = raw_value(lambda);
  return value < 0.0 ? 0.0 : value;
}

StieltjesPoint solve_fixed_point(const SpectralDensityFn& f, double c, cplx z,
                                 const SolverOptions& opts) {
  const std::vector<double> w = quad_nodes(f, opts.quad_nodes);
  return solve_point(w, c, z, {0.0, 0.0}, opts);
}

StieltjesSolution solve_grid(const SpectralDensityFn& f, double c,
                             std::span<const cplx> zs, const SolverOptions& opts) {
  const std::vector<double> w = quad_nodes(f, opts.quad_nodes);
  StieltjesSolution solution;
  solution.c = c;
  solution.points.resize(zs.size());

  if (opts.warm_start) {
    cplx guess{0.0, 0.0};
    for (std::size_t i = 0; i < zs.size(); ++i) {
      solution.points[i] = solve_point(w, c, zs[i], guess, opts);
      guess = solution.points[i].Su;
    }
  } else {
    parallel_for_indexed(static_cast<long>(zs.size()), [&](long i) {
      const auto idx = static_cast<std::size_t>(i);
      solution.points[idx] = solve_point(w, c, zs[idx], {0.0, 0.0}, opts);
    });
  }
  return solution;
}

std::complex<double> mp_reference(cplx z, double c, double sigma2) {
  if (!(z.imag() > 0.0)) throw DomainError("Stieltjes transform needs Im z > 0");
  if (!(c > 0.0) || !(sigma2 > 0.0)) throw ParameterError("mp_reference needs c, sigma2 > 0");

  // unit-scale transform at z/sigma2, then S_{sigma2}(z) = S_1(z/sigma2)/sigma2
  const cplx zs = z / sigma2;
  const cplx b = 1.0 - c - zs;
  const cplx disc = std::sqrt(b * b - 4.0 * c * zs);
  const cplx r1 = (b + disc) / (2.0 * c * zs);
  const cplx r2 = (b - disc) / (2.0 * c * zs);
  const cplx root = r1.imag() > r2.imag() ? r1 : r2;
  return root / sigma2;
}

MarchenkoPastur::MarchenkoPastur(double c, double sigma2) : c_(c), sigma2_(sigma2) {
  if (!(c > 0.0) || !(sigma2 > 0.0)) throw ParameterError("MP law needs c, sigma2 > 0");
  const double sq = std::sqrt(c);
  lower_ = sigma2 * (1.0 - sq) * (1.0 - sq);
  upper_ = sigma2 * (1.0 + sq) * (1.0 + sq);
  atom_ = c > 1.0 ? 1.0 - 1.0 / c : 0.0;

  // midpoint-rule CDF table; the sqrt edges are integrable
  const int cells = 200000;
  grid_x_.resize(cells + 1);
  grid_cdf_.resize(cells + 1);
  const double h = (upper_ - lower_) / cells;
  grid_x_[0] = lower_;
  grid_cdf_[0] = 0.0;
  double acc = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double mid = lower_ + (i + 0.5) * h;
    acc += density(mid) * h;
    grid_x_[static_cast<std::size_t>(i + 1)] = lower_ + (i + 1) * h;
    grid_cdf_[static_cast<std::size_t>(i + 1)] = acc;
  }
  const double continuous_mass = std::min(1.0, 1.0 / c_);
  for (double& v : grid_cdf_) v *= continuous_mass / acc;
}

double MarchenkoPastur::density(double x) const {
  if (x <= lower_ || x >= upper_) return 0.0;
  return std::sqrt((upper_ - x) * (x - lower_)) / (kTwoPi * c_ * sigma2_ * x);
}

double MarchenkoPastur::cdf(double x) const {
  double base = x >= 0.0 ? atom_ : 0.0;
  if (x <= lower_) return x >= 0.0 ? base : 0.0;
  if (x >= upper_) return 1.0;
  const auto it = std::upper_bound(grid_x_.begin(), grid_x_.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - grid_x_.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - grid_x_[lo]) / (grid_x_[hi] - grid_x_[lo]);
  return base + grid_cdf_[lo] + t * (grid_cdf_[hi] - grid_cdf_[lo]);
}

std::vector<DensityPoint> density_from_stieltjes(const StieltjesSolution& solution, double v) {
  if (v < 1e-4 || v > 1e-2)
    throw DomainError("inversion height v must lie in [1e-4, 1e-2]");
  std::vector<DensityPoint> out;
  out.reserve(solution.points.size());
  for (const auto& point : solution.points) {
    if (std::abs(point.z.imag() - v) > 1e-9 * v)
      throw DomainError("solution points must sit on the line Im z = v");
    out.push_back({point.z.real(), point.S.imag() / std::numbers::pi});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  return out;
}

double support_upper_bound(const SpectralDensityFn& f, double c) {
  const double sq = std::sqrt(c);
  return (1.0 + sq) * (1.0 + sq) * kTwoPi * f.max_value();
}

std::vector<std::complex<double>> density_grid(double x_max, double v) {
  // pad below zero: hard edges (c = 1) and the c > 1 atom smear part of
  // their mass to negative x at height v, and the grid should catch it
  const double x_lo = -0.05 * x_max;
  std::vector<double> xs;
  const int coarse = 1600;
  for (int i = 0; i <= coarse; ++i)
    xs.push_back(x_lo + (x_max - x_lo) * i / coarse);
  // refine around the origin: the inverted density is steepest there
  for (double x = -50.0 * v; x <= 50.0 * v; x += v / 4.0) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<std::complex<double>> zs;
  zs.reserve(xs.size());
  for (double x : xs) zs.emplace_back(x, v);
  return zs;
}

LsdCdf::LsdCdf(const std::vector<DensityPoint>& density) {
  if (density.size() < 2) throw ParameterError("density table needs at least two points");
  x_.resize(density.size());
  cdf_.resize(density.size());
  x_[0] = density[0].x;
  cdf_[0] = 0.0;
  for (std::size_t i = 1; i < density.size(); ++i) {
    x_[i] = density[i].x;
    cdf_[i] = cdf_[i - 1] + 0.5 * (density[i].density + density[i - 1].density) *
                                (density[i].x - density[i - 1].x);
  }
  mass_ = cdf_.back();
  if (!(mass_ > 0.0)) throw ParameterError("density table carries no mass");
  for (double& v : cdf_) v /= mass_;
}

double LsdCdf::operator()(double x) const {
  if (x <= x_.front()) return 0.0;
  if (x >= x_.back()) return 1.0;
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - x_.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - x_[lo]) / (x_[hi] - x_[lo]);
  return cdf_[lo] + t * (cdf_[hi] - cdf_[lo]);
}

}  // namespace mixspec
