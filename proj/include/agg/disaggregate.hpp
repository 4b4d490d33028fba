#ifndef AGG_DISAGGREGATE_HPP
#define AGG_DISAGGREGATE_HPP

#include "agg/mixture.hpp"

namespace agg {

/// Output of the product-spectrum disaggregation.
struct ProductMixtureResult {
  MixtureDensity phi;
  double c_star = 0.0;  // the normalizing constant C_*
  NoiseSpec noise;      // sigma^2_eps = sigma^2_1 sigma^2_2 C_* / (2 pi)
};

/// Mixture density of f = f1 * f2 built numerically from the factor
/// mixtures. Requires supp(phi1) in [0,1] and supp(phi2) in [-1,0].
/// The result density keeps the factors' endpoint exponents and tabulates
/// the smooth remainder on `grid_per_lobe` points per support lobe.
ProductMixtureResult product_mixture_numeric(const MixtureDensity& phi1,
                                             const NoiseSpec& noise1,
                                             const MixtureDensity& phi2,
                                             const NoiseSpec& noise2,
                                             int grid_per_lobe = 512,
                                             double rel_tol = 1e-8);

/// C* = int_0^1 x^{d1-1}(1-x)^{1-2d1}(1+x)
///      { int_0^1 y^{d2-1}(1-y)^{1-2d2}(1+y)/(1+xy) dy } dx,
/// symmetric in (d1, d2).
double compute_cstar(double d1, double d2, double rel_tol = 1e-9);

/// Mixture of f(lambda) = (1/2pi)(2 sin(|lambda|/2))^{-2d} g(lambda) for an
/// analytic g aggregated from phi_g with supp(phi_g) in [-a*, 0], a* < 1.
ProductMixtureResult fi_times_analytic(double d, const MixtureDensity& phi_g,
                                       const NoiseSpec& noise_g = NoiseSpec{1.0},
                                       int grid_per_lobe = 512,
                                       double rel_tol = 1e-8);

/// Fitted power-law behavior of the closed-form product mixture near
/// 0+, 0-, 1- and -1+.
struct ProductAsymptotics {
  double exp_zero_plus, exp_zero_minus, exp_one, exp_minus_one;
  double pref_zero_plus, pref_zero_minus, pref_one, pref_minus_one;
};

ProductAsymptotics verify_product_asymptotics(double d1, double d2);

}  // namespace agg

#endif
