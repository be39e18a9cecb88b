#include "orbis/test_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "orbis/error.hpp"

namespace orbis {

namespace {

using cplx = std::complex<double>;

cplx sinc(cplx z) {
  if (std::abs(z) < 1e-4) {
    const cplx z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

// Cardinal cubic B-spline on [0, 4].
double cubic_bspline(double x) {
  if (x <= 0.0 || x >= 4.0) return 0.0;
  if (x < 1.0) return x * x * x / 6.0;
  if (x < 2.0) return (-3.0 * x * x * x + 12.0 * x * x - 12.0 * x + 4.0) / 6.0;
  if (x < 3.0) return (3.0 * x * x * x - 24.0 * x * x + 60.0 * x - 44.0) / 6.0;
  const double y = 4.0 - x;
  return y * y * y / 6.0;
}

}  // namespace

TestFunctionPair gaussian_heat_pair(double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidInput, "heat time must be positive");
  TestFunctionPair p;
  p.family = "gaussian";
  p.parameter = t;
  p.h = [t](cplx r) { return std::exp(-t * r * r); };
  const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
  p.g = [t, norm](double u) { return norm * std::exp(-u * u / (4.0 * t)); };
  return p;
}

TestFunctionPair bspline_pair(double width) {
  if (!(width > 0.0)) throw Error(ErrorCode::InvalidInput, "B-spline width must be positive");
  TestFunctionPair p;
  p.family = "bspline";
  p.parameter = width;
  p.h = [width](cplx r) {
    const cplx s = sinc(width * r / 2.0);
    return s * s * s * s;
  };
  p.g = [width](double u) { return cubic_bspline(u / width + 2.0) / width; };
  p.support_radius = 2.0 * width;
  return p;
}

TestFunctionPair sech_pair(double a) {
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidInput, "sech scale must be positive");
  TestFunctionPair p;
  p.family = "sech";
  p.parameter = a;
  p.h = [a](cplx r) { return 1.0 / std::cosh(a * r); };
  p.g = [a](double u) { return 1.0 / (2.0 * a * std::cosh(std::numbers::pi * u / (2.0 * a))); };
  p.strip_half_width = std::numbers::pi / (2.0 * a);
  return p;
}

double fourier_consistency_error(const TestFunctionPair& pair, std::span<const double> rs,
                                 const QuadratureOptions& opts) {
  double worst = 0.0;
  for (double r : rs) {
    // g is even, so the transform is a cosine transform over the half-line.
    auto integrand = [&](double u) { return 2.0 * pair.g(u) * std::cos(r * u); };
    QuadratureResult q;
    if (pair.compact_support()) {
      // Split at the B-spline knots so every panel sees a polynomial.
      const double w = pair.support_radius / 2.0;
      q.value = integrate(integrand, 0.0, w, opts).value + integrate(integrand, w, 2.0 * w, opts).value;
    } else {
      q = integrate_half_line(integrand, opts, 4.0);
    }
    worst = std::max(worst, std::abs(q.value - pair.h_real(r)));
  }
  return worst;
}

double evenness_error(const TestFunctionPair& pair, double r_max, int samples) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = -r_max + 2.0 * r_max * i / (samples - 1);
    worst = std::max(worst, std::abs(pair.h({r, 0.0}) - pair.h({-r, 0.0})));
  }
  return worst;
}

}  // namespace orbis
