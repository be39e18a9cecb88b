#pragma once

#include <functional>

namespace orbis {

struct QuadratureOptions {
  double tol = 1e-11;       // absolute error target
  double rel_tol = 0.0;     // optional relative target, |value| * rel_tol
  int max_intervals = 20000;
  double tail_tol = 1e-14;  // integrand magnitude at which infinite ranges are cut
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

using Integrand = std::function<double(double)>;

// Globally adaptive 7-point Gauss / 15-point Kronrod quadrature on [a, b].
// Throws QuadratureFailure when the error estimate stays above the target.
QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureOptions& opts = {});

// Integral over (-inf, inf) for integrands decaying on both sides. The cut
// radius starts at `start_radius` and doubles until |f(+-R)| < tail_tol.
QuadratureResult integrate_real_line(const Integrand& f, const QuadratureOptions& opts = {},
                                     double start_radius = 4.0);

// Integral over [0, inf), same cut rule as integrate_real_line.
QuadratureResult integrate_half_line(const Integrand& f, const QuadratureOptions& opts = {},
                                     double start_radius = 4.0);

}  // namespace orbis
