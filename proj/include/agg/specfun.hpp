#ifndef AGG_SPECFUN_HPP
#define AGG_SPECFUN_HPP

namespace agg {

/// ln Gamma(x) for x > 0 (Lanczos, g = 7, 9 coefficients).
double log_gamma(double x);

/// Gamma(x) for any non-pole real x (reflection formula for x < 0).
double gamma_fn(double x);

/// ln B(a, b) for a, b > 0.
double log_beta(double a, double b);

/// Gauss hypergeometric function F(a,b;c;x) for real parameters and x <= 1.
/// Strategy: power series on |x| <= 0.7, the 1-x connection formula on
/// (0.7, 1), the Pfaff transformation for x < -0.7, and the Gauss value at
/// x = 1 (requires c - a - b > 0).
///
/// For x > 1 the real principal-value branch is evaluated through the
/// integral representation (a = 1, c > b > 0 only), which is the branch
/// entering G(x; d) at positive arguments.
double hyp2f1(double a, double b, double c, double x);

/// G(x; d) = F(1,d,2-d; 1/x) - x F(1,d,2-d; x) for x in [-1,1] \ {0},
/// 0 < d < 1/2. The reciprocal argument is evaluated through
/// F(a,b;c;1/x) = (x/(x-1))^b F(b,c-a;c;1/(1-x)) for x < 0, and through the
/// principal-value branch for x > 0.
double g_factor(double x, double d);

}  // namespace agg

#endif
