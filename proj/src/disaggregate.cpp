#include "agg/disaggregate.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace agg {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kEndpointTol = 1e-12;
// The inner integral I(x) behaves as a power of |x| near 0. Below kXMin it
// is continued by its fitted power law; on [kXMin, kXSwitch) it is
// interpolated in log-log coordinates, where that power law is nearly
// linear; above kXSwitch it is smooth and a Chebyshev table suffices.
constexpr double kXMin = 1e-6;
constexpr double kXSwitch = 0.05;

// Local cubic (4-point Lagrange) interpolation on a strictly increasing grid.
struct CubicTable {
  std::vector<double> x, v;

  double operator()(double t) const {
    if (t <= x.front()) return v.front();
    if (t >= x.back()) return v.back();
    auto it = std::upper_bound(x.begin(), x.end(), t);
    size_t j = static_cast<size_t>(it - x.begin()) - 1;
    j = j == 0 ? 0 : j - 1;
    if (j + 4 > x.size()) j = x.size() - 4;
    double r = 0.0;
    for (size_t k = j; k < j + 4; ++k) {
      double w = v[k];
      for (size_t m = j; m < j + 4; ++m)
        if (m != k) w *= (t - x[m]) / (x[k] - x[m]);
      r += w;
    }
    return r;
  }
};

// I(x) = \int phi_other(y) x / ((1 - x y)(x - y)) dy. The factor supports
// keep x and y on opposite signs, so both denominators are cancellation-free;
// the kernel has a boundary layer of width |x| at y = 0, resolved by
// geometric breakpoints.
double inner_integral(const MixtureDensity& other, double x, double rel_tol) {
  auto g = [x](double y, double, double) {
    return x / ((1.0 - x * y) * (x - y));
  };
  std::vector<double> breaks;
  const double ax = std::abs(x);
  const double s = x > 0.0 ? 1.0 : -1.0;
  if (ax < 0.25)
    for (double t = 0.25 * ax; t < 0.5; t *= 4.0) breaks.push_back(-s * t);
  return other.integrate_weighted(g, 0.0, 0.0, rel_tol, breaks);
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

// Interpolated representation of I(x) on one side of the origin.
struct SideInterp {
  std::vector<std::pair<double, double>> ranges;  // lobe supports
  std::vector<CubicTable> tables;                 // I(x) per lobe
  CubicTable log_table;                           // ln|x| -> ln I(x)
  bool has_log = false;
  double switch_abs = 0.0;
  double ln_a = 0.0, beta = 0.0;  // I(x) ~ exp(ln_a) |x|^beta below kXMin

  double eval(double x) const {
    const double ax = std::abs(x);
    if (has_log) {
      if (ax <= kXMin) {
        if (ax <= 0.0) return 0.0;
        return std::exp(ln_a + beta * std::log(ax));
      }
      if (ax < switch_abs) return std::exp(log_table(std::log(ax)));
    }
    for (size_t i = 0; i < ranges.size(); ++i)
      if (x >= ranges[i].first - kEndpointTol &&
          x <= ranges[i].second + kEndpointTol)
        return tables[i](x);
    return 0.0;
  }
};

SideInterp build_side(const MixtureDensity& factor, const MixtureDensity& other,
                      double rel_tol, int n) {
  SideInterp side;
  const bool positive = factor.support_hi() > kEndpointTol;

  double touch_extent = 0.0;  // |far end| of the lobe touching 0, if any
  for (const auto& l : factor.lobes()) {
    CubicTable t;
    for (int i = 0; i <= n; ++i) {
      const double u = 0.5 * (1.0 - std::cos(kPi * i / n));
      const double x = i == n ? l.hi : l.lo + (l.hi - l.lo) * u;
      t.x.push_back(x);
      t.v.push_back(std::abs(x) < kEndpointTol
                        ? 0.0
                        : inner_integral(other, x, rel_tol));
    }
    side.ranges.emplace_back(l.lo, l.hi);
    side.tables.push_back(std::move(t));
    const double near_end = positive ? l.lo : -l.hi;
    if (std::abs(near_end) <= kEndpointTol)
      touch_extent = positive ? l.hi : -l.lo;
  }

  if (touch_extent > 4.0 * kXMin) {
    const double top = std::min(1.4 * kXSwitch, touch_extent);
    const double step = std::log(2.0) / 8.0;
    CubicTable lt;
    for (double u = std::log(kXMin);; u += step) {
      const double ax = std::exp(u);
      if (ax > touch_extent) break;
      lt.x.push_back(u);
      lt.v.push_back(
          std::log(inner_integral(other, positive ? ax : -ax, rel_tol)));
      if (ax >= top) break;
    }
    if (lt.x.size() >= 8) {
      std::vector<double> fx(lt.x.begin(), lt.x.begin() + 6);
      std::vector<double> fy(lt.v.begin(), lt.v.begin() + 6);
      const LinearFit fit = linear_fit(fx, fy);
      side.beta = fit.slope;
      side.ln_a = fit.intercept;
      side.switch_abs = std::min(kXSwitch, std::exp(lt.x[lt.x.size() - 3]));
      side.log_table = std::move(lt);
      side.has_log = true;
    }
  }
  return side;
}

}  // namespace

double compute_cstar(double d1, double d2, double rel_tol) {
  if (!(d1 > 0.0 && d1 < 0.5 && d2 > 0.0 && d2 < 0.5))
    throw std::domain_error("compute_cstar requires 0 < d1, d2 < 1/2");
  QuadOptions inner_opt;
  inner_opt.rel_tol = std::max(1e-2 * rel_tol, 1e-13);
  QuadOptions outer_opt;
  outer_opt.rel_tol = rel_tol;
  auto outer = [&](double x) {
    auto g = [x](double y) { return (1.0 + y) / (1.0 + x * y); };
    return (1.0 + x) * integrate_power_weighted(g, 0.0, 1.0, d2 - 1.0,
                                                1.0 - 2.0 * d2, inner_opt);
  };
  return integrate_power_weighted(outer, 0.0, 1.0, d1 - 1.0, 1.0 - 2.0 * d1,
                                  outer_opt);
}

ProductMixtureResult product_mixture_numeric(const MixtureDensity& phi1,
                                             const NoiseSpec& noise1,
                                             const MixtureDensity& phi2,
                                             const NoiseSpec& noise2,
                                             int grid_per_lobe, double rel_tol) {
  if (phi1.support_lo() < -kEndpointTol)
    throw SupportError("first factor must be supported in [0, 1]");
  if (phi2.support_hi() > kEndpointTol)
    throw SupportError("second factor must be supported in [-1, 0]");
  if (!check_admissibility(phi1).admissible ||
      !check_admissibility(phi2).admissible)
    throw DivergenceError("inadmissible factor mixture: inner integral diverges");

  const int n = std::max(grid_per_lobe, 32);
  const double inner_tol = std::max(1e-2 * rel_tol, 1e-12);

  auto cstar_inner = [&](double x) {
    return phi2.integrate([x](double y) { return 1.0 / (1.0 - x * y); },
                          inner_tol);
  };
  const double c_star = phi1.integrate(cstar_inner, std::min(rel_tol, 1e-9));

  auto pos = std::make_shared<SideInterp>(build_side(phi1, phi2, inner_tol, n));
  auto neg = std::make_shared<SideInterp>(build_side(phi2, phi1, inner_tol, n));

  auto scale = std::make_shared<double>(1.0 / c_star);
  std::vector<Lobe> lobes;
  auto add_lobes = [&](const std::vector<Lobe>& src,
                       const std::shared_ptr<SideInterp>& side) {
    for (const auto& l : src) {
      auto sm = l.smooth;
      lobes.push_back({l.lo, l.hi, l.alpha_lo, l.alpha_hi,
                       [sm, side, scale](double x) {
                         return sm(x) * side->eval(x) * *scale;
                       }});
    }
  };
  add_lobes(phi2.lobes(), neg);
  add_lobes(phi1.lobes(), pos);

  ProductMixtureResult result{
      MixtureDensity(MixtureKind::Tabulated, std::move(lobes)), c_star,
      NoiseSpec{noise1.variance * noise2.variance * c_star / (2.0 * kPi)}};
  if (phi1.d1)
    result.phi.d1 = phi1.d1;
  else if (phi1.d_at_plus_one() > 0.0)
    result.phi.d1 = phi1.d_at_plus_one();
  if (phi2.d2)
    result.phi.d2 = phi2.d2;
  else if (phi2.d_at_minus_one() > 0.0)
    result.phi.d2 = phi2.d_at_minus_one();

  // The construction integrates to 1 exactly; absorb the residual
  // interpolation error so the result is a density to quadrature accuracy.
  const double z = result.phi.integrate([](double) { return 1.0; },
                                        std::max(0.1 * rel_tol, 1e-9));
  *scale /= z;
  return result;
}

ProductMixtureResult fi_times_analytic(double d, const MixtureDensity& phi_g,
                                       const NoiseSpec& noise_g,
                                       int grid_per_lobe, double rel_tol) {
  if (!(d > 0.0 && d < 0.5))
    throw std::domain_error("fi_times_analytic requires 0 < d < 1/2");
  if (phi_g.support_hi() > kEndpointTol)
    throw SupportError("analytic-factor mixture must be supported in (-1, 0]");
  if (phi_g.support_lo() <= -1.0 + kEndpointTol)
    throw SupportError("analytic-factor mixture must stay away from -1");
  const auto fi = fi_mixture(d);
  return product_mixture_numeric(fi.first, fi.second, phi_g, noise_g,
                                 grid_per_lobe, rel_tol);
}

ProductAsymptotics verify_product_asymptotics(double d1, double d2) {
  const auto pm = product_fi_mixture_closed(d1, d2);
  const MixtureDensity& phi = pm.first;

  auto fit_at = [&](const std::function<double(double)>& point) {
    std::vector<double> lx, ly;
    for (int k = 18; k <= 30; ++k) {
      const double dist = std::ldexp(1.0, -k);
      const double v = phi(point(dist));
      if (!(v > 0.0) || !std::isfinite(v)) continue;
      lx.push_back(std::log(dist));
      ly.push_back(std::log(v));
    }
    if (lx.size() < 8)
      throw InconclusiveError("product asymptotics: too few usable points");
    const LinearFit fit = linear_fit(lx, ly);
    if (fit.r2 < 0.999)
      throw InconclusiveError("product asymptotics: regression R^2 < 0.999");
    return fit;
  };

  const LinearFit f0p = fit_at([](double t) { return t; });
  const LinearFit f0m = fit_at([](double t) { return -t; });
  const LinearFit f1 = fit_at([](double t) { return 1.0 - t; });
  const LinearFit fm1 = fit_at([](double t) { return -1.0 + t; });

  ProductAsymptotics out;
  out.exp_zero_plus = f0p.slope;
  out.exp_zero_minus = f0m.slope;
  out.exp_one = f1.slope;
  out.exp_minus_one = fm1.slope;
  out.pref_zero_plus = std::exp(f0p.intercept);
  out.pref_zero_minus = std::exp(f0m.intercept);
  out.pref_one = std::exp(f1.intercept);
  out.pref_minus_one = std::exp(fm1.intercept);
  return out;
}

}  // namespace agg
