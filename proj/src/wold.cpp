#include "agg/wold.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace agg {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// log f(lambda) with the endpoint power laws removed:
//   L(lambda) = log f + 2 d0 log(2 sin(lambda/2)) + 2 dpi log(2 cos(lambda/2)).
// L stays bounded on (0, pi) for spectra matching their declared exponents.
double regular_log(const SpectralDensity& f, double lambda, double d0,
                   double dpi) {
  const double v = f(lambda);
  if (!(v > 0.0) || !std::isfinite(v))
    throw DivergenceError("log spectrum not integrable: f <= 0 on the grid");
  double L = std::log(v);
  if (d0 != 0.0) L += 2.0 * d0 * std::log(2.0 * std::sin(0.5 * lambda));
  if (dpi != 0.0) L += 2.0 * dpi * std::log(2.0 * std::cos(0.5 * lambda));
  return L;
}

// Cepstral coefficients c_0..c_J of log f on an M-point grid, including the
// exact d0/j + dpi (-1)^j / j contribution of the removed singular parts
// (from -log(2 sin(lambda/2)) = sum_j cos(j lambda)/j and its cos mirror).
std::vector<double> cepstral_coeffs(const SpectralDensity& f, int J, int M) {
  const double d0 = f.d_at_zero(), dpi = f.d_at_pi();
  std::vector<double> L(M);
  for (int k = 1; k < M / 2; ++k)
    L[k] = regular_log(f, 2.0 * kPi * k / M, d0, dpi);
  // Endpoint values by even-function Richardson extrapolation; the closed
  // forms diverge there while L has a finite limit.
  L[0] = (4.0 * L[1] - L[2]) / 3.0;
  L[M / 2] = (4.0 * L[M / 2 - 1] - L[M / 2 - 2]) / 3.0;
  for (int k = M / 2 + 1; k < M; ++k) L[k] = L[M - k];

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, L);

  std::vector<double> c(J + 1);
  for (int j = 0; j <= J; ++j) {
    c[j] = spec[j].real() / M;
    if (j > 0) c[j] += (d0 + dpi * (j % 2 == 0 ? 1.0 : -1.0)) / j;
  }
  return c;
}

// psi from the cepstrum by the exponential recurrence
// psi_k = (1/k) sum_{j=1}^k j c_j psi_{k-j}.
Eigen::ArrayXd psi_from_cepstrum(const std::vector<double>& c, int J) {
  Eigen::ArrayXd psi(J + 1);
  psi[0] = 1.0;
  for (int k = 1; k <= J; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * c[j] * psi[k - j];
    psi[k] = s / k;
  }
  return psi;
}

}  // namespace

double innovation_variance(const SpectralDensity& f, double rel_tol) {
  const double d0 = f.d_at_zero(), dpi = f.d_at_pi();
  QuadOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-12;
  // int_0^pi L with the substitution dist-to-endpoint = (pi/2) e^{-u} on each
  // half; the integrand decays like e^{-u}, so a finite cutoff is exact to
  // ~1e-20 * sup|L|.
  const double cut = 46.0;
  const double left = integrate(
      [&](double u) {
        const double lam = 0.5 * kPi * std::exp(-u);
        return lam * regular_log(f, lam, d0, dpi);
      },
      0.0, cut, opt);
  // Near pi the distance must stay above the representation granularity of
  // pi - dist; the discarded tail is O(1e-14 sup|L|), below abs_tol.
  const double cut_right = 32.0;
  const double right = integrate(
      [&](double u) {
        const double dist = 0.5 * kPi * std::exp(-u);
        return dist * regular_log(f, kPi - dist, d0, dpi);
      },
      0.0, cut_right, opt);
  return 2.0 * kPi * std::exp((left + right) / kPi);
}

Eigen::ArrayXd fi_ma_coeffs(double d, int J) {
  if (!(d > 0.0 && d < 0.5))
    throw std::domain_error("fi_ma_coeffs requires 0 < d < 1/2");
  if (J < 1) throw std::invalid_argument("fi_ma_coeffs requires J >= 1");
  Eigen::ArrayXd h(J + 1);
  h[0] = 1.0;
  for (int j = 1; j <= J; ++j) h[j] = h[j - 1] * (j - 1 + d) / j;
  return h;
}

MaExpansion ma_from_spectrum(const SpectralDensity& f, int J, int grid) {
  if (J < 1) throw std::invalid_argument("ma_from_spectrum requires J >= 1");
  if (grid < 8 * J || (grid & (grid - 1)) != 0)
    throw std::invalid_argument(
        "ma_from_spectrum requires a power-of-two grid >= 8 J");

  const auto c1 = cepstral_coeffs(f, J, grid);
  const auto c2 = cepstral_coeffs(f, J, 2 * grid);
  const Eigen::ArrayXd psi1 = psi_from_cepstrum(c1, J);
  const Eigen::ArrayXd psi2 = psi_from_cepstrum(c2, J);

  // The floor is an absolute scale reference (psi_0 = 1): once coefficients
  // decay to ~1e-8 the grids only differ by FFT rounding noise, which must
  // not count as aliasing.
  const double floor = 1e-8;
  for (int j = 1; j <= J / 2; ++j) {
    const double ref = std::max(std::abs(psi2[j]), floor);
    if (std::abs(psi1[j] - psi2[j]) > 1e-4 * ref)
      throw AliasingError(
          "cepstral factorization not grid-converged: increase the FFT grid");
  }
  MaExpansion ma;
  ma.psi = psi2;
  ma.sigma2 = 2.0 * kPi * std::exp(c2[0]);
  ma.truncation = J;
  return ma;
}

MaExpansion product_ma_coeffs(double d, const Eigen::ArrayXd& g_coeffs,
                              double sigma2_g, int J) {
  if (!(d > 0.0 && d < 0.5))
    throw std::domain_error("product_ma_coeffs requires 0 < d < 1/2");
  if (g_coeffs.size() < 1 || std::abs(g_coeffs[0] - 1.0) > 1e-12)
    throw std::invalid_argument("analytic-factor MA coefficients need g_0 = 1");
  if (!(sigma2_g > 0.0))
    throw std::invalid_argument("analytic-factor variance must be positive");
  const Eigen::ArrayXd h = fi_ma_coeffs(d, J);
  MaExpansion ma;
  ma.psi = Eigen::ArrayXd::Zero(J + 1);
  const int ng = static_cast<int>(g_coeffs.size());
  for (int k = 0; k <= J; ++k) {
    double s = 0.0;
    const int jmax = std::min(k, ng - 1);
    for (int j = 0; j <= jmax; ++j) s += h[k - j] * g_coeffs[j];
    ma.psi[k] = s;
  }
  ma.sigma2 = sigma2_g / (2.0 * kPi);
  ma.truncation = J;
  return ma;
}

}  // namespace agg
