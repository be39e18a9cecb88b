#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <string>

#include "orbis/quadrature.hpp"

namespace orbis {

// An even spectral function h and its time-side transform g, normalized by
// h(r) = \int g(u) e^{iru} du, i.e. g(u) = (1/2pi) \int h(r) e^{-iru} dr.
struct TestFunctionPair {
  std::string family;
  double parameter = 0.0;
  std::function<std::complex<double>(std::complex<double>)> h;
  std::function<double(double)> g;
  // h is holomorphic on |Im r| < strip_half_width (infinity when entire).
  double strip_half_width = std::numeric_limits<double>::infinity();
  // g vanishes for |u| > support_radius (infinity when not compactly supported).
  double support_radius = std::numeric_limits<double>::infinity();

  double h_real(double r) const { return h({r, 0.0}).real(); }
  bool compact_support() const { return support_radius < std::numeric_limits<double>::infinity(); }
};

// h(r) = exp(-t r^2), g(u) = (4 pi t)^{-1/2} exp(-u^2 / 4t).
TestFunctionPair gaussian_heat_pair(double t);

// g = fourfold self-convolution of the unit-mass box of width w (a cubic
// B-spline supported on [-2w, 2w]); h(r) = (sin(wr/2) / (wr/2))^4.
TestFunctionPair bspline_pair(double width);

// h(r) = sech(a r), g(u) = sech(pi u / 2a) / 2a. Holomorphic on the strip
// |Im r| < pi / 2a; admissible for a < pi.
TestFunctionPair sech_pair(double a);

// Largest |h(r) - \int g(u) e^{iru} du| over the given r values.
double fourier_consistency_error(const TestFunctionPair& pair, std::span<const double> rs,
                                 const QuadratureOptions& opts = {});

// Largest |h(r) - h(-r)| over a symmetric sample grid of [-r_max, r_max].
double evenness_error(const TestFunctionPair& pair, double r_max = 20.0, int samples = 401);

}  // namespace orbis
