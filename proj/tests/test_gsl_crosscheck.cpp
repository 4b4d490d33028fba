// Cross-checks against GSL, used strictly as an independent test oracle.
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_gamma.h>
#include <gsl/gsl_sf_hyperg.h>

#include <cmath>

#include "agg/mixture.hpp"
#include "agg/specfun.hpp"
#include "agg/spectral.hpp"
#include "doctest.h"

using namespace agg;

namespace {
struct GslErrorsOff {
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  ~GslErrorsOff() { gsl_set_error_handler(old); }
};
}  // namespace

TEST_CASE("log-gamma agrees with GSL") {
  for (double x : {0.01, 0.3, 0.5, 1.0, 2.5, 7.75, 42.0})
    CHECK(log_gamma(x) == doctest::Approx(gsl_sf_lngamma(x)).epsilon(1e-14));
}

TEST_CASE("hypergeometric function agrees with GSL inside the disk") {
  GslErrorsOff guard;
  for (double d : {0.1, 0.25, 0.45}) {
    for (double x = -0.95; x < 0.96; x += 0.1) {
      if (std::abs(x) < 1e-12) continue;
      gsl_sf_result r;
      const int status = gsl_sf_hyperg_2F1_e(1.0, d, 2.0 - d, x, &r);
      REQUIRE(status == GSL_SUCCESS);
      CHECK(hyp2f1(1.0, d, 2.0 - d, x) == doctest::Approx(r.val).epsilon(1e-10));
    }
  }
  // Generic parameters as well.
  gsl_sf_result r;
  REQUIRE(gsl_sf_hyperg_2F1_e(0.35, 0.2, 1.65, -0.73, &r) == GSL_SUCCESS);
  CHECK(hyp2f1(0.35, 0.2, 1.65, -0.73) == doctest::Approx(r.val).epsilon(1e-10));
}

TEST_CASE("principal value branch agrees with a GSL Cauchy integral") {
  // F(1, 1; 2.5; 2) has the integral representation
  //   [Gamma(2.5)/Gamma(1.5)] int_0^1 (1-t)^{1/2} / (1 - 2t) dt,
  // a pure Cauchy principal value at t = 1/2 that QAWC evaluates directly.
  GslErrorsOff guard;
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(2000);
  gsl_function f;
  f.function = [](double t, void*) { return -0.5 * std::sqrt(1.0 - t); };
  f.params = nullptr;
  double pv = 0.0, abserr = 0.0;
  const int status =
      gsl_integration_qawc(&f, 0.0, 1.0, 0.5, 1e-12, 1e-10, 2000, ws, &pv, &abserr);
  gsl_integration_workspace_free(ws);
  REQUIRE(status == GSL_SUCCESS);
  const double pref = std::exp(gsl_sf_lngamma(2.5) - gsl_sf_lngamma(1.5));
  CHECK(hyp2f1(1.0, 1.0, 2.5, 2.0) == doctest::Approx(pref * pv).epsilon(1e-8));
}

namespace {
struct SpectralParams {
  double d, lam;
};

double fi_spectral_integrand(double x, void* p) {
  const auto* q = static_cast<SpectralParams*>(p);
  const double c = fi_mixture_constant(q->d);
  const double phi = c * std::pow(x, q->d - 1.0) *
                     std::pow(1.0 - x, 1.0 - 2.0 * q->d) * (1.0 + x);
  const double denom = 1.0 - 2.0 * x * std::cos(q->lam) + x * x;
  return phi / denom;
}
}  // namespace

TEST_CASE("aggregated spectrum agrees with a GSL singular quadrature") {
  GslErrorsOff guard;
  const double kPi = 3.141592653589793238462643383279502884;
  const double d = 0.3, lam = 1.0;
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4000);
  SpectralParams p{d, lam};
  gsl_function f;
  f.function = fi_spectral_integrand;
  f.params = &p;
  double val = 0.0, abserr = 0.0;
  const int status =
      gsl_integration_qags(&f, 0.0, 1.0, 1e-12, 1e-10, 4000, ws, &val, &abserr);
  gsl_integration_workspace_free(ws);
  REQUIRE(status == GSL_SUCCESS);
  auto [phi, noise] = fi_mixture(d);
  const double want = noise.variance / (2.0 * kPi) * val;
  CHECK(spectral_from_mixture_at(phi, noise, lam) ==
        doctest::Approx(want).epsilon(1e-9));
}
