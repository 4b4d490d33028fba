#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <vector>

#include "agg/mixture.hpp"
#include "agg/specfun.hpp"
#include "doctest.h"

using namespace agg;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double mass(const MixtureDensity& phi) {
  return phi.integrate([](double) { return 1.0; });
}

// Kolmogorov-Smirnov distance between `draws` and a CDF evaluated on `grid`.
double ks_distance(std::vector<double> draws, const std::vector<double>& grid,
                   const std::function<double(double)>& cdf) {
  std::sort(draws.begin(), draws.end());
  double dist = 0.0;
  for (double x : grid) {
    const auto it = std::upper_bound(draws.begin(), draws.end(), x);
    const double ecdf = static_cast<double>(it - draws.begin()) / draws.size();
    dist = std::max(dist, std::abs(ecdf - cdf(x)));
  }
  return dist;
}

}  // namespace

TEST_CASE("normalization constant reference values") {
  CHECK(fi_mixture_constant(0.25) ==
        doctest::Approx(0.25028054739903245233).epsilon(1e-14));
  // The two closed forms of the constant must agree across the whole range.
  for (int i = 1; i <= 99; ++i) {
    const double d = 0.005 * i;
    const double a = std::exp(log_gamma(3.0 - d) - log_gamma(d) -
                              log_gamma(2.0 - 2.0 * d)) / 2.0;
    const double b = std::pow(2.0, 2.0 * d - 2.0) * std::sin(kPi * d) /
                     std::sqrt(kPi) *
                     std::exp(log_gamma(3.0 - d) - log_gamma(1.5 - d));
    CHECK(a == doctest::Approx(b).epsilon(1e-13));
    CHECK(fi_mixture_constant(d) == doctest::Approx(a).epsilon(1e-13));
  }
}

TEST_CASE("fractional mixture density") {
  const double d = 0.25;
  auto [phi, noise] = fi_mixture(d);
  CHECK(mass(phi) == doctest::Approx(1.0).epsilon(1e-10));
  // Pointwise value at x = 0.5 from the defining formula.
  const double want = fi_mixture_constant(d) * std::pow(0.5, d - 1.0) *
                      std::pow(0.5, 1.0 - 2.0 * d) * 1.5;
  CHECK(phi(0.5) == doctest::Approx(want).epsilon(1e-13));
  CHECK(noise.variance ==
        doctest::Approx(std::sin(kPi * d) / (fi_mixture_constant(d) * kPi))
            .epsilon(1e-13));
  CHECK(phi(-0.1) == 0.0);
  CHECK(phi.support_lo() == doctest::Approx(0.0));
  CHECK(phi.support_hi() == doctest::Approx(1.0));
  CHECK(phi.d_at_plus_one() == doctest::Approx(d).epsilon(1e-14));
  CHECK(phi.d_at_minus_one() == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(fi_mixture(0.5), std::domain_error);
  CHECK_THROWS_AS(fi_mixture(0.0), std::domain_error);
}

TEST_CASE("seasonal mixture is the exact reflection") {
  auto [fi, n1] = fi_mixture(0.3);
  auto [sfi, n2] = sfi_mixture(0.3);
  CHECK(n1.variance == doctest::Approx(n2.variance).epsilon(1e-15));
  for (double x : {0.05, 0.2, 0.5, 0.77, 0.99})
    CHECK(sfi(-x) == doctest::Approx(fi(x)).epsilon(1e-14));
  CHECK(mass(sfi) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("uniform mixture") {
  auto phi = uniform_mixture(-0.5, 0.5);
  CHECK(mass(phi) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(phi(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(phi(0.7) == 0.0);
  CHECK_THROWS_AS(uniform_mixture(-1.2, 0.5), std::domain_error);
  CHECK_THROWS_AS(uniform_mixture(0.5, 0.5), std::domain_error);
}

TEST_CASE("semiparametric mixture") {
  auto phi = semiparametric_mixture(0.2, 0.3, [](double) { return 1.0; });
  CHECK(mass(phi) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(phi.d1.value() == doctest::Approx(0.2));
  CHECK(phi.d2.value() == doctest::Approx(0.3));
  REQUIRE(phi.psi_at_plus_one.has_value());
  // Density/weight ratio must reproduce the constant smooth part everywhere.
  const double z = phi(0.0);
  for (double x : {-0.9, -0.3, 0.4, 0.8}) {
    const double w = std::pow(1.0 - x, 1.0 - 2.0 * 0.2) *
                     std::pow(1.0 + x, 1.0 - 2.0 * 0.3);
    CHECK(phi(x) / w == doctest::Approx(z).epsilon(1e-12));
  }
  CHECK(phi.psi_at_plus_one.value() == doctest::Approx(z).epsilon(1e-12));
  CHECK_THROWS_AS(semiparametric_mixture(0.6, 0.3, [](double) { return 1.0; }),
                  std::domain_error);
}

TEST_CASE("tabulated mixture renormalizes") {
  Eigen::ArrayXd x(3), v(3);
  x << -0.5, 0.0, 0.5;
  v << 0.0, 3.0, 0.0;  // tent, raw mass 1.5
  auto phi = tabulated_mixture(x, v);
  CHECK(mass(phi) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(phi(0.0) == doctest::Approx(2.0).epsilon(1e-12));
  Eigen::ArrayXd bad(3);
  bad << -0.5, -0.6, 0.5;
  CHECK_THROWS_AS(tabulated_mixture(bad, v), std::invalid_argument);
}

TEST_CASE("admissibility classification") {
  auto [fi, n1] = fi_mixture(0.3);
  auto rep = check_admissibility(fi);
  CHECK(rep.admissible);
  CHECK(rep.long_memory);
  CHECK(rep.exponent_plus == doctest::Approx(1.0 - 2.0 * 0.3).epsilon(1e-12));

  auto uni = uniform_mixture(-0.5, 0.5);
  auto rep2 = check_admissibility(uni);
  CHECK(rep2.admissible);
  CHECK_FALSE(rep2.long_memory);

  // Positive density all the way to x = 1: the key integral diverges.
  Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(64, 0.0, 1.0);
  Eigen::ArrayXd v = Eigen::ArrayXd::Ones(64);
  auto flat = tabulated_mixture(x, v);
  CHECK_FALSE(check_admissibility(flat).admissible);
}

TEST_CASE("weighted integrals fold endpoint exponents") {
  auto uni = uniform_mixture(-0.5, 0.5);
  const double got = uni.integrate_weighted(
      [](double, double, double) { return 1.0; }, -1.0, -1.0);
  CHECK(got == doctest::Approx(std::log(3.0)).epsilon(1e-12));

  auto [fi, n] = fi_mixture(0.3);
  // Long-memory criterion integral: combined exponent at 1 dips below -1.
  CHECK_THROWS_AS(fi.integrate_weighted(
                      [](double, double, double) { return 1.0; }, -2.0, 0.0),
                  DivergenceError);
}

TEST_CASE("coefficient sampler matches the density (KS test)") {
  std::mt19937_64 rng(12345);
  const int n = 100000;

  SUBCASE("uniform") {
    auto phi = uniform_mixture(-0.5, 0.5);
    std::vector<double> draws(n);
    for (auto& v : draws) v = sample_coefficient(phi, rng);
    std::vector<double> grid;
    for (int i = 0; i <= 200; ++i) grid.push_back(-0.5 + i / 200.0);
    const double d = ks_distance(draws, grid, [](double x) { return x + 0.5; });
    CHECK(d < 0.01);
  }

  SUBCASE("fractional d = 0.25") {
    const double dd = 0.25;
    auto [phi, noise] = fi_mixture(dd);
    const double c = fi_mixture_constant(dd);
    auto cdf = [&](double x) {
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      if (x <= 0.5) {
        return c * integrate_power_weighted(
                       [&](double t) {
                         return std::pow(1.0 - t, 1.0 - 2.0 * dd) * (1.0 + t);
                       },
                       0.0, x, dd - 1.0, 0.0);
      }
      return 1.0 - c * integrate_power_weighted(
                           [&](double t) {
                             return std::pow(t, dd - 1.0) * (1.0 + t);
                           },
                           x, 1.0, 0.0, 1.0 - 2.0 * dd);
    };
    std::vector<double> draws(n);
    for (auto& v : draws) v = sample_coefficient(phi, rng);
    std::vector<double> grid;
    for (int k = 40; k >= 4; --k) grid.push_back(std::pow(2.0, -0.25 * k));
    for (int i = 1; i < 800; ++i) grid.push_back(0.25 + 0.75 * i / 800.0);
    const double d = ks_distance(draws, grid, cdf);
    CHECK(d < 0.01);
  }
}

TEST_CASE("sampler first moment matches quadrature") {
  auto [phi, noise] = product_fi_mixture_closed(0.2, 0.3);
  const double want = phi.integrate([](double x) { return x; });
  const double m2 = phi.integrate([](double x) { return x * x; });
  std::mt19937_64 rng(777);
  const int n = 200000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += sample_coefficient(phi, rng);
  const double mean = s / n;
  const double se = std::sqrt((m2 - want * want) / n);
  CHECK(std::abs(mean - want) < 5.0 * se);
}

TEST_CASE("sampler determinism for a fixed seed") {
  auto [phi, noise] = fi_mixture(0.3);
  std::mt19937_64 a(99), b(99);
  for (int i = 0; i < 100; ++i)
    CHECK(sample_coefficient(phi, a) == sample_coefficient(phi, b));
}

TEST_CASE("CSV round trip") {
  namespace fs = std::filesystem;
  const auto path = (fs::temp_directory_path() / "mixture_rt.csv").string();

  auto uni = uniform_mixture(-0.4, 0.6);
  save_mixture_csv(uni, path);
  auto back = load_mixture_csv(path);
  for (double x : {-0.3, 0.0, 0.25, 0.55})
    CHECK(back(x) == doctest::Approx(uni(x)).epsilon(1e-6));

  auto [fi, n] = fi_mixture(0.3);
  save_mixture_csv(fi, path, 4096);
  auto back2 = load_mixture_csv(path);
  for (double x : {0.1, 0.3, 0.5, 0.7, 0.9})
    CHECK(back2(x) == doctest::Approx(fi(x)).epsilon(2e-3));
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_mixture_csv("/nonexistent/definitely/missing.csv"),
                  std::runtime_error);
}
