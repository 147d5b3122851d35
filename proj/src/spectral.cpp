#include "mixspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "mixspec/errors.hpp"
#include "mixspec/kernels.hpp"

namespace mixspec {

std::string to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::Bn_source: return "Bn";
    case MatrixKind::An_source: return "An";
    case MatrixKind::Gn_source: return "Gn";
    case MatrixKind::blocked: return "blocked";
    case MatrixKind::blocked_star: return "blocked_star";
    case MatrixKind::unspecified: return "unspecified";
  }
  return "unknown";
}

GramSpectrum eig_sym(const Eigen::MatrixXd& a) { return eig_sym(a, 0, MatrixKind::unspecified); }

GramSpectrum eig_sym(const Eigen::MatrixXd& a, int n_columns, MatrixKind kind) {
  if (a.rows() != a.cols()) throw ShapeError("eig_sym needs a square matrix");
  const double scale = a.cwiseAbs().maxCoeff();
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * (1.0 + scale)) throw ShapeError("eig_sym input is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      ((a + a.transpose()) / 2.0).eval(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ShapeError("symmetric eigensolver failed");

  GramSpectrum spectrum;
  spectrum.N = static_cast<int>(a.rows());
  spectrum.n = n_columns;
  spectrum.c = n_columns > 0 ? static_cast<double>(a.rows()) / n_columns : 0.0;
  spectrum.kind = kind;
  spectrum.eigenvalues.assign(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + a.rows());
  std::sort(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end());

  const double trace = a.trace();
  double sum = 0.0;
  for (double lambda : spectrum.eigenvalues) sum += lambda;
  if (std::abs(sum - trace) > 1e-8 * (1.0 + std::abs(trace)))
    throw ShapeError("eigenvalue sum drifted from the trace");

  const double lam_max = std::max(std::abs(spectrum.eigenvalues.front()),
                                  std::abs(spectrum.eigenvalues.back()));
  for (double& lambda : spectrum.eigenvalues) {
    if (lambda < 0.0 && lambda >= -1e-10 * lam_max) {
      lambda = 0.0;
      ++spectrum.clipped;
    }
  }
  return spectrum;
}

std::complex<double> empirical_stieltjes(const GramSpectrum& spectrum, std::complex<double> z) {
  if (!(z.imag() > 0.0)) throw DomainError("Stieltjes transform needs Im z > 0");
  return kernels::stieltjes_batch_serial(spectrum.eigenvalues, std::span(&z, 1))[0];
}

double EsdFunction::operator()(double x) const {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

EsdFunction esd(const GramSpectrum& spectrum) { return EsdFunction{spectrum.eigenvalues}; }

double kolmogorov_distance(const EsdFunction& esd,
                           const std::function<double(double)>& reference) {
  const auto& lam = esd.sorted;
  const double n = static_cast<double>(lam.size());
  double sup = 0.0;
  std::size_t i = 0;
  while (i < lam.size()) {
    std::size_t j = i;
    while (j < lam.size() && lam[j] == lam[i]) ++j;  // ties jump together
    // both sides of the step; the reference may itself jump here, so its
    // left value is taken one ulp below the jump point
    const double left_ref =
        reference(std::nextafter(lam[i], -std::numeric_limits<double>::infinity()));
    const double right_ref = reference(lam[i]);
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(j) / n;
    sup = std::max({sup, std::abs(below - left_ref), std::abs(above - right_ref)});
    i = j;
  }
  return sup;
}

}  // namespace mixspec
