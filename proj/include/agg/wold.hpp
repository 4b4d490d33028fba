#ifndef AGG_WOLD_HPP
#define AGG_WOLD_HPP

#include <Eigen/Core>

#include "agg/spectral.hpp"

namespace agg {

/// Truncated MA(infinity) representation X_t = sum_j psi_j Z_{t-j},
/// Z_t ~ iid (0, sigma2), psi_0 = 1.
struct MaExpansion {
  Eigen::ArrayXd psi;     // psi_0..psi_J
  double sigma2 = 0.0;    // innovation variance
  int truncation = 0;     // J
};

/// Szego innovation variance sigma^2 = 2 pi exp{(1/2pi) int log f(lambda)}.
/// The power singularities at 0 and pi integrate to zero analytically
/// (int_0^pi log(2 sin(lambda/2)) = 0) and are removed before quadrature.
double innovation_variance(const SpectralDensity& f, double rel_tol = 1e-10);

/// MA coefficients of FI(d): h_j = Gamma(j+d) / (Gamma(j+1) Gamma(d)),
/// by the recurrence h_j = h_{j-1} (j-1+d)/j. Returns h_0..h_J.
Eigen::ArrayXd fi_ma_coeffs(double d, int J);

/// Minimum-phase factorization by the cepstral method: Fourier coefficients
/// of log f (with the singular parts subtracted analytically and restored as
/// exact d/j cepstral terms), then the recursive exponential for psi.
/// `grid` must be a power of two >= 8 J. Always re-runs on the doubled grid
/// and throws AliasingError when any psi_j (j <= J/2) moves by more than
/// 1e-4 relative.
MaExpansion ma_from_spectrum(const SpectralDensity& f, int J = 4096,
                             int grid = 1 << 16);

/// MA expansion of f_FI(d) * g from the MA coefficients g_j of the analytic
/// factor: psi_k = sum_{j<=k} h_{k-j} g_j, sigma^2 = sigma2_g / (2 pi).
MaExpansion product_ma_coeffs(double d, const Eigen::ArrayXd& g_coeffs,
                              double sigma2_g, int J);

}  // namespace agg

#endif
