#ifndef AGG_SPECTRAL_HPP
#define AGG_SPECTRAL_HPP

#include <Eigen/Core>
#include <functional>

#include "agg/mixture.hpp"

namespace agg {

enum class SpectralKind { FI, SFI, ProductFI, UniformClosed, FromMixture, TabulatedEven };

/// A nonnegative even spectral density on [-pi, pi], possibly with power
/// singularities f ~ c |lambda|^{-2 d0} at 0 and f ~ c |pi - lambda|^{-2 dpi}
/// at +-pi. Closed forms return +infinity at a singular frequency;
/// quadrature-backed densities throw DivergenceError there.
class SpectralDensity {
 public:
  SpectralDensity(SpectralKind kind, double d_zero, double d_pi,
                  std::function<double(double)> eval);

  double operator()(double lambda) const;
  SpectralKind kind() const { return kind_; }
  double d_at_zero() const { return d_zero_; }
  double d_at_pi() const { return d_pi_; }

 private:
  SpectralKind kind_;
  double d_zero_, d_pi_;
  std::function<double(double)> eval_;
};

/// Autocovariances gamma(0..H) of an aggregated process.
struct AcvfSequence {
  Eigen::ArrayXd gamma;
  NoiseSpec noise;
  bool long_memory = false;  // diagnostic: gamma is not absolutely summable
};

// Closed forms ---------------------------------------------------------------

SpectralDensity fi_spectral(double d);
SpectralDensity sfi_spectral(double d);
SpectralDensity product_fi_spectral(double d1, double d2);
/// Aggregated spectrum of the uniform mixture on [a,b] (analytic, closed form).
SpectralDensity uniform_closed_spectral(double a, double b, double sigma2_eps);
/// Piecewise-linear even density through (lambda_i, f_i), lambda in [0, pi].
SpectralDensity tabulated_even_spectral(const Eigen::ArrayXd& lambda,
                                        const Eigen::ArrayXd& f);

// Aggregation ----------------------------------------------------------------

/// f(lambda) = sigma2/(2 pi) \int phi(x) / |1 - x e^{i lambda}|^2 dx by
/// singularity-aware quadrature.
double spectral_from_mixture_at(const MixtureDensity& phi, const NoiseSpec& noise,
                                double lambda, double rel_tol = 1e-8);

/// Quadrature-backed SpectralDensity wrapping spectral_from_mixture_at.
SpectralDensity spectral_from_mixture(const MixtureDensity& phi,
                                      const NoiseSpec& noise,
                                      double rel_tol = 1e-8);

/// gamma(h) = sigma2 \int x^h phi(x) / (1 - x^2) dx for h = 0..H.
AcvfSequence acvf_from_mixture(const MixtureDensity& phi, const NoiseSpec& noise,
                               int lag_horizon, double rel_tol = 1e-8);

/// \int_0^pi f(lambda) g(lambda) dlambda, with the power singularities of f
/// at the interval ends removed using the density's metadata.
double integrate_spectrum_against(const SpectralDensity& f,
                                  const std::function<double(double)>& g,
                                  double rel_tol = 1e-9);

// Diagnostics ----------------------------------------------------------------

struct TailFit {
  double exponent = 0.0;   // f ~ prefactor * dist^{exponent}
  double prefactor = 0.0;
  double r2 = 1.0;
};

/// Log-log power-law fit of f near lambda = 0 or lambda = pi on the geometric
/// grid dist = 2^{-k}, k = 14..26.
TailFit tail_exponent(const SpectralDensity& f, double at,
                      double eval_rel_tol = 1e-8);

}  // namespace agg

#endif
