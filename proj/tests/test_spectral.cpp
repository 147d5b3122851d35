#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <complex>
#include <vector>

#include "mixspec/errors.hpp"
#include "mixspec/kernels.hpp"
#include "mixspec/rng.hpp"
#include "mixspec/spectral.hpp"

using namespace mixspec;

namespace {

// Independent small-scale eigenvalue oracle: characteristic polynomial by
// Faddeev-LeVerrier, roots by Durand-Kerner iteration.
std::vector<double> charpoly_roots(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  // p(x) = x^n + c[1] x^{n-1} + ... + c[n]
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[0] = 1.0;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    m = a * m + c[static_cast<std::size_t>(k - 1)] * Eigen::MatrixXd::Identity(n, n);
    c[static_cast<std::size_t>(k)] = -(a * m).trace() / k;
  }

  std::vector<std::complex<double>> roots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    roots[static_cast<std::size_t>(i)] = std::pow(std::complex<double>(0.4, 0.9), i);
  auto eval = [&](std::complex<double> x) {
    std::complex<double> p{1.0, 0.0};
    for (int k = 1; k <= n; ++k) p = p * x + c[static_cast<std::size_t>(k)];
    return p;
  };
  for (int iter = 0; iter < 500; ++iter) {
    double move = 0.0;
    for (int i = 0; i < n; ++i) {
      std::complex<double> denom{1.0, 0.0};
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= roots[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(j)];
      const std::complex<double> delta = eval(roots[static_cast<std::size_t>(i)]) / denom;
      roots[static_cast<std::size_t>(i)] -= delta;
      move = std::max(move, std::abs(delta));
    }
    if (move < 1e-13) break;
  }
  std::vector<double> real_roots;
  for (const auto& r : roots) real_roots.push_back(r.real());
  std::sort(real_roots.begin(), real_roots.end());
  return real_roots;
}

Eigen::MatrixXd random_gram(int n, std::uint64_t seed) {
  SplitMix rng(seed);
  Eigen::MatrixXd x(n, 2 * n);
  for (int j = 0; j < 2 * n; ++j)
    for (int i = 0; i < n; ++i) x(i, j) = rng.normal();
  return kernels::gram(x);
}

}  // namespace

TEST_CASE("eig_sym on tiny closed forms") {
  CHECK(eig_sym(Eigen::MatrixXd::Identity(3, 3)).eigenvalues == std::vector<double>{1.0, 1.0, 1.0});

  Eigen::MatrixXd two(2, 2);
  two << 2.0, 1.0, 1.0, 2.0;
  const GramSpectrum s = eig_sym(two);
  CHECK(s.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("eig_sym matches the characteristic-polynomial oracle on an 8x8 gram") {
  const Eigen::MatrixXd g = random_gram(8, 2024);
  const GramSpectrum s = eig_sym(g);
  const std::vector<double> oracle = charpoly_roots(g);
  REQUIRE(oracle.size() == s.eigenvalues.size());
  for (std::size_t i = 0; i < oracle.size(); ++i)
    CHECK(s.eigenvalues[i] == doctest::Approx(oracle[i]).epsilon(1e-6));
}

TEST_CASE("eig_sym trace consistency and affine shift") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const Eigen::MatrixXd g = random_gram(12, seed);
    const GramSpectrum s = eig_sym(g);
    double sum = 0.0;
    for (double v : s.eigenvalues) sum += v;
    CHECK(sum == doctest::Approx(g.trace()).epsilon(1e-8));

    const double t = -0.7;
    const GramSpectrum shifted =
        eig_sym((g + t * Eigen::MatrixXd::Identity(12, 12)).eval());
    for (int i = 0; i < 12; ++i)
      CHECK(shifted.eigenvalues[static_cast<std::size_t>(i)] ==
            doctest::Approx(s.eigenvalues[static_cast<std::size_t>(i)] + t).epsilon(1e-8));
  }
}

TEST_CASE("eig_sym clips only vanishing negatives and rejects asymmetry") {
  // rank-deficient gram: N=3 from 2 columns has an exact zero eigenvalue
  Eigen::MatrixXd x(3, 2);
  x << 1.0, 0.5, -0.3, 1.2, 0.8, -0.1;
  const GramSpectrum s = eig_sym(kernels::gram(x));
  CHECK(s.eigenvalues.front() >= 0.0);
  CHECK(s.eigenvalues.front() <= 1e-10 * s.eigenvalues.back());

  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 0.0, 1.0;
  CHECK_THROWS_AS(eig_sym(bad), ShapeError);
  CHECK_THROWS_AS(eig_sym(Eigen::MatrixXd::Zero(2, 3)), ShapeError);

  // a genuinely negative spectrum is preserved
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 0.0, 1.0, 1.0, 0.0;
  const GramSpectrum ind = eig_sym(indefinite);
  CHECK(ind.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(ind.clipped == 0);
}

TEST_CASE("empirical stieltjes hand values") {
  GramSpectrum atom;
  atom.eigenvalues = {0.0};
  atom.N = 1;
  const auto s0 = empirical_stieltjes(atom, {0.0, 1.0});
  CHECK(s0.real() == doctest::Approx(0.0));
  CHECK(s0.imag() == doctest::Approx(1.0));

  GramSpectrum pair;
  pair.eigenvalues = {1.0, 3.0};
  pair.N = 2;
  const auto s = empirical_stieltjes(pair, {0.0, 1.0});
  CHECK(s.real() == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(s.imag() == doctest::Approx(0.3).epsilon(1e-14));

  CHECK_THROWS_AS(empirical_stieltjes(pair, {0.0, -1.0}), DomainError);
  CHECK_THROWS_AS(empirical_stieltjes(pair, {0.0, 0.0}), DomainError);
}

TEST_CASE("empirical stieltjes is Herglotz and normalized at infinity") {
  const GramSpectrum s = eig_sym(random_gram(40, 9));
  for (double im : {0.1, 0.5, 1.0, 10.0}) {
    for (double re : {-2.0, 0.0, 1.0, 5.0}) {
      const auto value = empirical_stieltjes(s, {re, im});
      CHECK(value.imag() > 0.0);
      CHECK(std::abs(value) <= 1.0 / im + 1e-15);
    }
  }
  const std::complex<double> tail = empirical_stieltjes(s, {0.0, 1000.0});
  CHECK(std::abs(std::complex<double>(0.0, -1000.0) * tail - 1.0) < 1e-2);
}

TEST_CASE("kolmogorov distance") {
  GramSpectrum s;
  s.eigenvalues = {0.0, 1.0};
  const EsdFunction f = esd(s);
  CHECK(kolmogorov_distance(f, [&](double x) { return f(x); }) == 0.0);

  GramSpectrum atom;
  atom.eigenvalues = {0.0, 0.0, 0.0};
  CHECK(kolmogorov_distance(esd(atom), [](double x) { return x >= 0.0 ? 1.0 : 0.0; }) == 0.0);

  // two-point spectrum against uniform [0,1]
  CHECK(kolmogorov_distance(f, [](double x) {
          return std::clamp(x, 0.0, 1.0);
        }) == doctest::Approx(0.5));
}

TEST_CASE("esd step function evaluates counts") {
  GramSpectrum s;
  s.eigenvalues = {1.0, 1.0, 2.0, 5.0};
  const EsdFunction f = esd(s);
  CHECK(f(0.0) == 0.0);
  CHECK(f(1.0) == doctest::Approx(0.5));
  CHECK(f(1.5) == doctest::Approx(0.5));
  CHECK(f(2.0) == doctest::Approx(0.75));
  CHECK(f(10.0) == 1.0);
}
