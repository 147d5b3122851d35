#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mixspec/process.hpp"

namespace mixspec {

/// Spectral density f(lambda) = (1/2pi)(gamma_0 + 2 sum_k gamma_k cos k lambda)
/// on [0, 2pi). Symmetric about pi and integrates to gamma_0. Construction
/// rejects truncations whose series dips below -1e-8 gamma_0; smaller
/// negative excursions are clamped to 0 at evaluation.
class SpectralDensityFn {
 public:
  static SpectralDensityFn from_autocov(const AutocovarianceSeq& seq);
  static SpectralDensityFn constant(double value);  // f == value >= 0

  double operator()(double lambda) const;
  double gamma0() const { return gamma0_; }
  double max_value() const { return max_value_; }
  int max_lag() const { return static_cast<int>(gamma_.size()) - 1; }

 private:
  SpectralDensityFn() = default;
  double raw_value(double lambda) const;  // unclamped series
  std::vector<double> gamma_;
  double gamma0_ = 0.0;
  double max_value_ = 0.0;
};

struct SolverOptions {
  int quad_nodes = 2048;
  double tol = 1e-12;
  int max_iter = 10000;
  bool warm_start = false;  // solve grid points in order, seeding each from the last
};

/// One solved point of the limiting-law equation.
struct StieltjesPoint {
  std::complex<double> z;
  std::complex<double> S;    // Stieltjes transform of the LSD
  std::complex<double> Su;   // companion transform, Su = -(1-c)/z + c S
  int iterations = 0;
  double residual = 0.0;
};

struct StieltjesSolution {
  double c = 0.0;
  std::vector<StieltjesPoint> points;
};

/// Damped fixed-point solve of
///   z = -1/Su + (c/2pi) Int_0^2pi 2pi f / (1 + 2pi f Su) dlambda
/// started at Su = -1/z. The step factor halves whenever Im Su would leave
/// the upper half-plane or the update grows two iterations in a row.
/// Converged means |z - rhs(Su)| <= tol (1 + |z|).
StieltjesPoint solve_fixed_point(const SpectralDensityFn& f, double c, std::complex<double> z,
                                 const SolverOptions& opts = {});

/// Solves a z-grid; points run concurrently unless warm_start is set, in
/// which case they run sequentially in grid order.
StieltjesSolution solve_grid(const SpectralDensityFn& f, double c,
                             std::span<const std::complex<double>> zs,
                             const SolverOptions& opts = {});

/// Closed-form Marchenko-Pastur Stieltjes transform (ratio c, scale sigma2);
/// the quadratic-root branch with Im S > 0.
std::complex<double> mp_reference(std::complex<double> z, double c, double sigma2);

/// Marchenko-Pastur law with density, support edges and a grid-integrated CDF.
class MarchenkoPastur {
 public:
  MarchenkoPastur(double c, double sigma2);

  double lower_edge() const { return lower_; }
  double upper_edge() const { return upper_; }
  double atom() const { return atom_; }  // mass at 0 when c > 1
  double density(double x) const;
  double cdf(double x) const;

 private:
  double c_, sigma2_, lower_, upper_, atom_;
  std::vector<double> grid_x_, grid_cdf_;
};

struct DensityPoint {
  double x = 0.0;
  double density = 0.0;
};

/// Stieltjes inversion density(x) = (1/pi) Im S(x + iv) from a solution whose
/// points sit on a horizontal line at height v in [1e-4, 1e-2].
std::vector<DensityPoint> density_from_stieltjes(const StieltjesSolution& solution, double v);

/// (1 + sqrt(c))^2 sup 2pi f: an upper bound for the support of the LSD.
double support_upper_bound(const SpectralDensityFn& f, double c);

/// Horizontal z-grid at height v covering [0, x_max], padded below 0 so
/// the smeared mass of hard edges and atoms is captured, and refined near
/// the origin where the inverted density varies fastest.
std::vector<std::complex<double>> density_grid(double x_max, double v);

/// Monotone CDF interpolated from a density table, normalized to total mass 1.
class LsdCdf {
 public:
  explicit LsdCdf(const std::vector<DensityPoint>& density);
  double operator()(double x) const;
  double total_mass() const { return mass_; }

 private:
  std::vector<double> x_, cdf_;
  double mass_ = 0.0;
};

}  // namespace mixspec
