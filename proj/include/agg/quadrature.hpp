#ifndef AGG_QUADRATURE_HPP
#define AGG_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "agg/errors.hpp"

namespace agg {

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 20000;
  /// Extra initial interval boundaries (in the integration variable).
  std::vector<double> breakpoints{};
};

/// Globally adaptive Gauss-Kronrod (7-15) integration of f on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadOptions& opt = {});

/// Integrand that also receives the exact distances to the interval ends.
/// Transformed evaluation keeps (x - a) and (b - x) free of cancellation,
/// which matters for integrands peaked within ~1e-16 of an endpoint.
using WeightedIntegrand =
    std::function<double(double x, double dist_lo, double dist_hi)>;

/// \int_a^b (x-a)^{alpha_lo} (b-x)^{alpha_hi} g(x) dx with g smooth and
/// alpha_lo, alpha_hi > -1. Endpoint power singularities are removed by the
/// substitutions x = a + t^{1/(1+alpha_lo)} and x = b - t^{1/(1+alpha_hi)}
/// on the left and right halves. `x_breaks` are optional initial split
/// points given in the original variable.
double integrate_power_weighted(const WeightedIntegrand& g, double a, double b,
                                double alpha_lo, double alpha_hi,
                                const QuadOptions& opt = {},
                                const std::vector<double>& x_breaks = {});

double integrate_power_weighted(const std::function<double(double)>& g,
                                double a, double b, double alpha_lo,
                                double alpha_hi, const QuadOptions& opt = {},
                                const std::vector<double>& x_breaks = {});

}  // namespace agg

#endif
