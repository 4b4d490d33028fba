#include "agg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

namespace agg {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kEndpointTol = 1e-12;

double fold_frequency(double lambda) {
  if (!(lambda >= -kPi - 1e-12 && lambda <= kPi + 1e-12))
    throw std::domain_error("frequency outside [-pi, pi]");
  return std::min(std::abs(lambda), kPi);
}

struct LinearFit {
  double slope, intercept, r2;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double vxy = n * sxy - sx * sy;
  const double vx = n * sxx - sx * sx;
  const double vy = n * syy - sy * sy;
  LinearFit fit;
  fit.slope = vxy / vx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r2 = vy > 0.0 ? vxy * vxy / (vx * vy) : 1.0;
  return fit;
}

}  // namespace

SpectralDensity::SpectralDensity(SpectralKind kind, double d_zero, double d_pi,
                                 std::function<double(double)> eval)
    : kind_(kind), d_zero_(d_zero), d_pi_(d_pi), eval_(std::move(eval)) {}

double SpectralDensity::operator()(double lambda) const {
  return eval_(fold_frequency(lambda));
}

SpectralDensity fi_spectral(double d) {
  if (!(d > 0.0 && d < 0.5)) throw std::domain_error("FI requires 0 < d < 1/2");
  return SpectralDensity(SpectralKind::FI, d, 0.0, [d](double l) {
    if (l == 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(2.0 * std::sin(0.5 * l), -2.0 * d) / (2.0 * kPi);
  });
}

SpectralDensity sfi_spectral(double d) {
  if (!(d > 0.0 && d < 0.5)) throw std::domain_error("SFI requires 0 < d < 1/2");
  return SpectralDensity(SpectralKind::SFI, 0.0, d, [d](double l) {
    if (l == kPi) return std::numeric_limits<double>::infinity();
    return std::pow(2.0 * std::cos(0.5 * l), -2.0 * d) / (2.0 * kPi);
  });
}

SpectralDensity product_fi_spectral(double d1, double d2) {
  if (!(d1 > 0.0 && d1 < 0.5 && d2 > 0.0 && d2 < 0.5))
    throw std::domain_error("product FI requires 0 < d1, d2 < 1/2");
  return SpectralDensity(SpectralKind::ProductFI, d1, d2, [d1, d2](double l) {
    if (l == 0.0 || l == kPi) return std::numeric_limits<double>::infinity();
    return std::pow(2.0 * std::sin(0.5 * l), -2.0 * d1) *
           std::pow(2.0 * std::cos(0.5 * l), -2.0 * d2) /
           (4.0 * kPi * kPi);
  });
}

SpectralDensity uniform_closed_spectral(double a, double b, double sigma2_eps) {
  if (!(-1.0 < a && a < b && b < 1.0))
    throw std::domain_error("uniform spectrum requires -1 < a < b < 1");
  if (!(sigma2_eps > 0.0)) throw std::domain_error("noise variance must be > 0");
  auto eval = [a, b, sigma2_eps](double l) {
    const double c = std::cos(l);
    if (l == 0.0)
      return sigma2_eps / (2.0 * kPi * (1.0 - a) * (1.0 - b));
    if (l == kPi)
      return sigma2_eps / (2.0 * kPi * (1.0 + a) * (1.0 + b));
    const double s = std::sin(l);
    // atan(u) - atan(v) with u = (b-c)/s, v = (a-c)/s, evaluated without the
    // near-cancellation of two angles close to -pi/2.
    const double ang = std::atan2((b - a) * s, s * s + (b - c) * (a - c));
    return sigma2_eps * ang / (2.0 * kPi * (b - a) * s);
  };
  return SpectralDensity(SpectralKind::UniformClosed, 0.0, 0.0, eval);
}

SpectralDensity tabulated_even_spectral(const Eigen::ArrayXd& lambda,
                                        const Eigen::ArrayXd& f) {
  const auto n = lambda.size();
  if (n < 2 || f.size() != n)
    throw std::invalid_argument("tabulated spectrum needs matching grids");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0 && !(lambda[i] > lambda[i - 1]))
      throw std::invalid_argument("tabulated frequency grid must increase");
    if (!(f[i] >= 0.0)) throw std::invalid_argument("spectrum must be >= 0");
  }
  auto gx = std::make_shared<Eigen::ArrayXd>(lambda);
  auto gv = std::make_shared<Eigen::ArrayXd>(f);
  auto eval = [gx, gv](double l) {
    const auto& x = *gx;
    const auto& v = *gv;
    if (l <= x[0]) return v[0];
    if (l >= x[x.size() - 1]) return v[v.size() - 1];
    auto it = std::upper_bound(x.data(), x.data() + x.size(), l);
    const Eigen::Index i = it - x.data() - 1;
    const double w = (l - x[i]) / (x[i + 1] - x[i]);
    return (1.0 - w) * v[i] + w * v[i + 1];
  };
  return SpectralDensity(SpectralKind::TabulatedEven, 0.0, 0.0, eval);
}

double spectral_from_mixture_at(const MixtureDensity& phi, const NoiseSpec& noise,
                                double lambda, double rel_tol) {
  const double l = fold_frequency(lambda);
  const bool touches_plus = phi.support_hi() > 1.0 - kEndpointTol;
  const bool touches_minus = phi.support_lo() < -1.0 + kEndpointTol;
  if (l == 0.0 && touches_plus)
    throw DivergenceError("spectral density diverges at lambda = 0");
  if (l == kPi && touches_minus)
    throw DivergenceError("spectral density diverges at lambda = +-pi");

  const double sin_half = std::sin(0.5 * l);
  const double cos_half = std::cos(0.5 * l);
  const double one_minus_cos = 2.0 * sin_half * sin_half;
  const double one_plus_cos = 2.0 * cos_half * cos_half;

  // |1 - x e^{il}|^2, written so the (1 -+ x)^2 term is cancellation-free.
  auto g = [&](double x, double one_minus_x, double one_plus_x) {
    const double denom =
        x >= 0.0 ? one_minus_x * one_minus_x + 2.0 * x * one_minus_cos
                 : one_plus_x * one_plus_x - 2.0 * x * one_plus_cos;
    return 1.0 / denom;
  };

  // Pre-split around the sharp peak at x = cos(lambda) when it hugs +-1.
  std::vector<double> breaks;
  auto add_peak_breaks = [&](double dist_to_endpoint, bool at_plus) {
    for (double s = 0.25 * dist_to_endpoint; s < 0.5; s *= 4.0)
      breaks.push_back(at_plus ? 1.0 - s : -1.0 + s);
  };
  if (touches_plus && one_minus_cos < 1e-2 && l > 0.0)
    add_peak_breaks(one_minus_cos, true);
  if (touches_minus && one_plus_cos < 1e-2 && l < kPi)
    add_peak_breaks(one_plus_cos, false);

  const double integral = phi.integrate_weighted(g, 0.0, 0.0, rel_tol, breaks);
  return noise.variance / (2.0 * kPi) * integral;
}

SpectralDensity spectral_from_mixture(const MixtureDensity& phi,
                                      const NoiseSpec& noise, double rel_tol) {
  auto phi_copy = std::make_shared<MixtureDensity>(phi);
  auto eval = [phi_copy, noise, rel_tol](double l) {
    return spectral_from_mixture_at(*phi_copy, noise, l, rel_tol);
  };
  return SpectralDensity(SpectralKind::FromMixture, phi.d_at_plus_one(),
                         phi.d_at_minus_one(), eval);
}

AcvfSequence acvf_from_mixture(const MixtureDensity& phi, const NoiseSpec& noise,
                               int lag_horizon, double rel_tol) {
  if (lag_horizon < 0) throw std::invalid_argument("lag horizon must be >= 0");
  AcvfSequence acvf;
  acvf.gamma.resize(lag_horizon + 1);
  for (int h = 0; h <= lag_horizon; ++h) {
    auto g = [h](double x, double, double) { return std::pow(x, h); };
    acvf.gamma[h] = noise.variance * phi.integrate_weighted(g, -1.0, -1.0, rel_tol);
  }
  acvf.noise = noise;
  const auto rep = check_admissibility(phi);
  acvf.long_memory = rep.long_memory;
  return acvf;
}

double integrate_spectrum_against(const SpectralDensity& f,
                                  const std::function<double(double)>& g,
                                  double rel_tol) {
  const double d0 = f.d_at_zero(), dpi = f.d_at_pi();
  // Peel the power singularities off: f(l) = l^{-2 d0} (pi-l)^{-2 dpi} h(l).
  auto h = [&](double l, double dlo, double dhi) {
    return f(l) * std::pow(dlo, 2.0 * d0) * std::pow(dhi, 2.0 * dpi) * g(l);
  };
  QuadOptions opt;
  opt.rel_tol = rel_tol;
  return integrate_power_weighted(h, 0.0, kPi, -2.0 * d0, -2.0 * dpi, opt);
}

TailFit tail_exponent(const SpectralDensity& f, double at, double eval_rel_tol) {
  const bool at_zero = std::abs(at) < 1e-9;
  if (!at_zero && std::abs(at - kPi) > 1e-9)
    throw std::invalid_argument("tail_exponent expects at = 0 or at = pi");
  (void)eval_rel_tol;
  std::vector<double> lx, ly, fv;
  // Start deep enough that subleading tail corrections (as slow as
  // O(dist^{2d}) for mixture-backed spectra) stay below the fit tolerance.
  for (int k = 20; k <= 32; ++k) {
    const double dist = std::ldexp(1.0, -k);
    const double lambda = at_zero ? dist : kPi - dist;
    const double v = f(lambda);
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    lx.push_back(std::log(dist));
    ly.push_back(std::log(v));
    fv.push_back(v);
  }
  if (lx.size() < 6) throw InconclusiveError("tail fit: too few usable points");
  // Flat spectrum: no power law to fit; report exponent 0 directly.
  const auto [mn, mx] = std::minmax_element(ly.begin(), ly.end());
  if (*mx - *mn < 1e-3) {
    double mean = 0.0;
    for (double v : fv) mean += v;
    return {0.0, mean / fv.size(), 1.0};
  }
  const LinearFit fit = linear_fit(lx, ly);
  if (fit.r2 < 0.999)
    throw InconclusiveError("tail fit: regression R^2 < 0.999");
  return {fit.slope, std::exp(fit.intercept), fit.r2};
}

}  // namespace agg
