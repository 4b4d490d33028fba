#ifndef AGG_MIXTURE_HPP
#define AGG_MIXTURE_HPP

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "agg/quadrature.hpp"

namespace agg {

enum class MixtureKind { FI, SFI, ProductFI, Uniform, Semiparametric, Tabulated };

/// Variance of the micro-level AR(1) noise.
struct NoiseSpec {
  double variance = 1.0;
};

/// One support lobe of a mixture density:
///   phi(x) = (x - lo)^{alpha_lo} (hi - x)^{alpha_hi} smooth(x), x in [lo, hi].
/// The power weights carry the integrable endpoint singularities so that all
/// quadrature against the density can remove them exactly.
struct Lobe {
  double lo = 0.0, hi = 0.0;
  double alpha_lo = 0.0, alpha_hi = 0.0;
  std::function<double(double)> smooth;
};

/// Normalization constant C(d) of the FI(d) mixture density.
double fi_mixture_constant(double d);

/// A probability density on (-1, 1) for the random AR(1) coefficient.
class MixtureDensity {
 public:
  MixtureDensity(MixtureKind kind, std::vector<Lobe> lobes);

  MixtureKind kind() const { return kind_; }
  const std::vector<Lobe>& lobes() const { return lobes_; }
  double support_lo() const;
  double support_hi() const;

  /// phi(x); zero outside the support.
  double operator()(double x) const;

  /// \int phi(x) g(x) dx over the support.
  double integrate(const std::function<double(double)>& g,
                   double rel_tol = 1e-9) const;

  /// \int phi(x) g(x, 1-x, 1+x) (1-x)^{e_plus} (1+x)^{e_minus} dx.
  /// The extra exponents fold into the lobe weights when a lobe touches the
  /// corresponding endpoint (e.g. e_plus = -2 for the long-memory integral);
  /// throws DivergenceError when the combined exponent is <= -1.
  double integrate_weighted(const WeightedIntegrand& g, double e_plus,
                            double e_minus, double rel_tol = 1e-9,
                            const std::vector<double>& x_breaks = {}) const;

  /// Fractional-integration orders implied by the support endpoint exponents
  /// (d = (1 - alpha)/2 when the support touches the endpoint; 0 otherwise).
  double d_at_plus_one() const;
  double d_at_minus_one() const;

  // Parametric metadata, when the constructor knows it.
  std::optional<double> d1, d2;
  std::optional<double> psi_at_plus_one, psi_at_minus_one;

 private:
  MixtureKind kind_;
  std::vector<Lobe> lobes_;
};

// Constructors ---------------------------------------------------------------

/// FI(d): phi(x) = C(d) x^{d-1} (1-x)^{1-2d} (1+x) on [0,1],
/// sigma^2_eps = sin(pi d) / (C(d) pi).
std::pair<MixtureDensity, NoiseSpec> fi_mixture(double d);

/// SFI(d): the reflection phi(-x) of the FI(d) density, supported on [-1,0].
std::pair<MixtureDensity, NoiseSpec> sfi_mixture(double d);

/// Closed-form mixture density of the FI(d1) x SFI(d2) product spectrum.
std::pair<MixtureDensity, NoiseSpec> product_fi_mixture_closed(double d1,
                                                               double d2);

/// Uniform density on [a, b], -1 < a < b < 1.
MixtureDensity uniform_mixture(double a, double b);

/// phi(x) = (1-x)^{1-2d1} (1+x)^{1-2d2} psi(x) / Z on [-1,1]; Z by quadrature.
MixtureDensity semiparametric_mixture(double d1, double d2,
                                      std::function<double(double)> psi);

/// Piecewise-linear density through (x_i, phi_i); renormalized exactly.
MixtureDensity tabulated_mixture(const Eigen::ArrayXd& x,
                                 const Eigen::ArrayXd& phi);

// Operations -----------------------------------------------------------------

struct AdmissibilityReport {
  bool admissible = false;
  bool long_memory = false;
  double exponent_plus = 0.0;   // phi ~ c (1-x)^{alpha+} near +1 (inf if supp away)
  double exponent_minus = 0.0;  // phi ~ c (1+x)^{alpha-} near -1
};

/// Endpoint-exponent admissibility / long-memory classification.
AdmissibilityReport check_admissibility(const MixtureDensity& phi);

/// One draw with law phi. Rejection sampling with a Beta-family envelope for
/// the parametric kinds, inverse-CDF for tabulated grids.
double sample_coefficient(const MixtureDensity& phi, std::mt19937_64& rng);

// CSV interface: two columns "x,phi", header row, grid strictly increasing.
MixtureDensity load_mixture_csv(const std::string& path);
void save_mixture_csv(const MixtureDensity& phi, const std::string& path,
                      int grid_points = 1024);

}  // namespace agg

#endif
