#include "agg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace agg {
namespace {

// 15-point Kronrod nodes on [-1,1] (positive half) with Kronrod weights,
// and the embedded 7-point Gauss weights. QUADPACK dqk15 constants.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  double resabs = std::abs(resk);
  double fv[15];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    fv[j] = f1;
    fv[14 - j] = f2;
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
  resasc *= std::abs(h);
  resabs *= std::abs(h);
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = 50.0 * std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / eps)
    err = std::max(err, eps * resabs);
  return {a, b, resk * h, err};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadOptions& opt) {
  if (a == b) return 0.0;
  std::vector<double> bounds{a, b};
  for (double x : opt.breakpoints)
    if (x > a && x < b) bounds.push_back(x);
  std::sort(bounds.begin(), bounds.end());

  std::priority_queue<Segment> heap;
  double total = 0.0, err = 0.0;
  int n = 0;
  for (size_t i = 0; i + 1 < bounds.size(); ++i) {
    Segment s = gk15(f, bounds[i], bounds[i + 1]);
    total += s.value;
    err += s.error;
    heap.push(s);
    ++n;
  }
  auto tol = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
  while (err > tol() && n < opt.max_intervals) {
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval at floating-point resolution; keep its estimate as final.
      err -= worst.error;
      continue;
    }
    Segment l = gk15(f, worst.a, mid);
    Segment r = gk15(f, mid, worst.b);
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++n;
  }
  if (err > tol())
    throw QuadratureError("adaptive quadrature tolerance not met");
  return total;
}

double integrate_power_weighted(const WeightedIntegrand& g, double a, double b,
                                double alpha_lo, double alpha_hi,
                                const QuadOptions& opt,
                                const std::vector<double>& x_breaks) {
  if (!(alpha_lo > -1.0 && alpha_hi > -1.0))
    throw DivergenceError("endpoint exponent <= -1: integral diverges");
  if (a >= b) return 0.0;
  const double mid = 0.5 * (a + b);

  QuadOptions half = opt;
  half.rel_tol = 0.5 * opt.rel_tol;
  half.abs_tol = 0.5 * opt.abs_tol;

  double left, right;
  {
    // Left half: x = a + t^q, q = 1/(1+alpha_lo); (x-a)^{alpha_lo} dx = (1/q') dt
    // with the Jacobian folding the weight away exactly.
    const double p = 1.0 + alpha_lo;  // t = (x-a)^p
    half.breakpoints.clear();
    for (double x : x_breaks)
      if (x > a && x < mid) half.breakpoints.push_back(std::pow(x - a, p));
    auto f = [&](double t) {
      const double dlo = std::pow(t, 1.0 / p);
      const double x = a + dlo;
      const double dhi = (b - a) - dlo;
      return (1.0 / p) * std::pow(dhi, alpha_hi) * g(x, dlo, dhi);
    };
    if (alpha_lo == 0.0) {
      auto f0 = [&](double x) {
        return std::pow(b - x, alpha_hi) * g(x, x - a, b - x);
      };
      left = integrate(f0, a, mid, half);
    } else {
      left = integrate(f, 0.0, std::pow(mid - a, p), half);
    }
  }
  {
    const double p = 1.0 + alpha_hi;  // t = (b-x)^p
    half.breakpoints.clear();
    for (double x : x_breaks)
      if (x > mid && x < b) half.breakpoints.push_back(std::pow(b - x, p));
    auto f = [&](double t) {
      const double dhi = std::pow(t, 1.0 / p);
      const double x = b - dhi;
      const double dlo = (b - a) - dhi;
      return (1.0 / p) * std::pow(dlo, alpha_lo) * g(x, dlo, dhi);
    };
    if (alpha_hi == 0.0) {
      auto f0 = [&](double x) {
        return std::pow(x - a, alpha_lo) * g(x, x - a, b - x);
      };
      right = integrate(f0, mid, b, half);
    } else {
      right = integrate(f, 0.0, std::pow(b - mid, p), half);
    }
  }
  return left + right;
}

double integrate_power_weighted(const std::function<double(double)>& g,
                                double a, double b, double alpha_lo,
                                double alpha_hi, const QuadOptions& opt,
                                const std::vector<double>& x_breaks) {
  return integrate_power_weighted(
      [&](double x, double, double) { return g(x); }, a, b, alpha_lo, alpha_hi,
      opt, x_breaks);
}

}  // namespace agg
