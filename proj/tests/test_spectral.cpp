#include <cmath>

#include "agg/mixture.hpp"
#include "agg/specfun.hpp"
#include "agg/spectral.hpp"
#include "doctest.h"

using namespace agg;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

double fi_closed(double d, double lam) {
  return std::pow(2.0 * std::sin(std::abs(lam) / 2.0), -2.0 * d) / (2.0 * kPi);
}

// Fractional-noise autocovariance via log-gamma.
double fi_acvf(double d, int h) {
  return std::exp(log_gamma(1.0 - 2.0 * d) + log_gamma(h + d) - log_gamma(d) -
                  log_gamma(1.0 - d) - log_gamma(h + 1.0 - d));
}
}  // namespace

TEST_CASE("closed-form spectra") {
  auto f = fi_spectral(0.3);
  CHECK(f(1.0) == doctest::Approx(fi_closed(0.3, 1.0)).epsilon(1e-14));
  CHECK(f(-1.0) == doctest::Approx(f(1.0)).epsilon(1e-15));  // even
  CHECK(f.d_at_zero() == doctest::Approx(0.3));
  CHECK(f.d_at_pi() == doctest::Approx(0.0).scale(1.0));
  CHECK(std::isinf(f(0.0)));

  auto s = sfi_spectral(0.3);
  CHECK(s(1.0) == doctest::Approx(f(kPi - 1.0)).epsilon(1e-13));
  CHECK(std::isinf(s(kPi)));

  // Product form is the pointwise product of the two factor densities.
  auto p = product_fi_spectral(0.2, 0.3);
  CHECK(p(1.2) ==
        doctest::Approx(fi_spectral(0.2)(1.2) * sfi_spectral(0.3)(1.2))
            .epsilon(1e-13));
  CHECK_THROWS_AS(fi_spectral(0.7), std::domain_error);
  CHECK_THROWS_AS(f(4.0), std::domain_error);
}

TEST_CASE("aggregated spectrum matches the fractional closed form") {
  for (double d : {0.1, 0.25, 0.4}) {
    auto [phi, noise] = fi_mixture(d);
    for (double lam : {0.05, 0.3, 1.0, 2.2, kPi}) {
      CHECK(spectral_from_mixture_at(phi, noise, lam) ==
            doctest::Approx(fi_closed(d, lam)).epsilon(1e-7));
    }
  }
}

TEST_CASE("uniform mixture: quadrature equals the closed-form spectrum") {
  auto phi = uniform_mixture(-0.6, -0.2);
  auto closed = uniform_closed_spectral(-0.6, -0.2, 1.0);
  for (double lam : {0.0, 0.4, 1.3, 2.6, kPi}) {
    CHECK(spectral_from_mixture_at(phi, NoiseSpec{1.0}, lam) ==
          doctest::Approx(closed(lam)).epsilon(1e-8));
  }
  // No divergence anywhere, including the endpoints of the frequency range.
  CHECK(std::isfinite(closed(0.0)));
  CHECK(std::isfinite(closed(kPi)));
}

TEST_CASE("quadrature-backed density refuses singular frequencies") {
  auto [phi, noise] = fi_mixture(0.3);
  auto f = spectral_from_mixture(phi, noise);
  CHECK_THROWS_AS(f(0.0), DivergenceError);
  CHECK(f(0.5) == doctest::Approx(fi_closed(0.3, 0.5)).epsilon(1e-7));
}

TEST_CASE("autocovariances of the fractional mixture") {
  for (double d : {0.1, 0.4}) {
    auto [phi, noise] = fi_mixture(d);
    auto acvf = acvf_from_mixture(phi, noise, 50);
    REQUIRE(acvf.gamma.size() == 51);
    CHECK(acvf.long_memory);
    for (int h = 0; h <= 50; ++h)
      CHECK(acvf.gamma[h] == doctest::Approx(fi_acvf(d, h)).epsilon(1e-7));
  }
}

TEST_CASE("autocovariances of the uniform mixture") {
  auto phi = uniform_mixture(-0.5, 0.5);
  auto acvf = acvf_from_mixture(phi, NoiseSpec{1.0}, 6);
  CHECK_FALSE(acvf.long_memory);
  CHECK(acvf.gamma[0] == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(acvf.gamma[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(acvf.gamma[2] == doctest::Approx(std::log(3.0) - 1.0).epsilon(1e-10));
  CHECK(acvf.gamma[3] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("spectrum integrates back to the variance") {
  // gamma(0) = 2 int_0^pi f, with the power singularity at 0 removed.
  const double d = 0.3;
  auto f = fi_spectral(d);
  const double got =
      2.0 * integrate_spectrum_against(f, [](double) { return 1.0; });
  CHECK(got == doctest::Approx(fi_acvf(d, 0)).epsilon(1e-9));
}

TEST_CASE("tail exponent diagnostics on closed forms") {
  auto f = fi_spectral(0.25);
  auto fit0 = tail_exponent(f, 0.0);
  CHECK(fit0.exponent == doctest::Approx(-0.5).epsilon(2e-4));
  CHECK(fit0.prefactor == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-3));

  auto s = sfi_spectral(0.25);
  auto fitp = tail_exponent(s, kPi);
  CHECK(fitp.exponent == doctest::Approx(-0.5).epsilon(2e-4));
  CHECK(fitp.prefactor == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-3));
}

TEST_CASE("tabulated spectrum interpolation") {
  Eigen::ArrayXd lam(3), v(3);
  lam << 0.0, kPi / 2.0, kPi;
  v << 2.0, 1.0, 2.0;
  auto f = tabulated_even_spectral(lam, v);
  CHECK(f(kPi / 4.0) == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(f(-kPi / 4.0) == doctest::Approx(1.5).epsilon(1e-13));
}
