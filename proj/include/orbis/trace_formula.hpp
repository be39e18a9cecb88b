#pragma once

#include <complex>
#include <vector>

#include "orbis/enumeration.hpp"
#include "orbis/orbisurface.hpp"
#include "orbis/quadrature.hpp"
#include "orbis/test_functions.hpp"

namespace orbis {

// Spectral parameters r_n with r_n^2 = lambda_n - 1/4: real and >= 0, or
// purely imaginary with 0 < Im r <= 1/2 for small eigenvalues.
struct SpectralParameters {
  std::vector<std::complex<double>> r_values;

  // r for each eigenvalue lambda >= 0 of the Laplacian (lambda = 0 gives i/2).
  static SpectralParameters from_eigenvalues(const std::vector<double>& eigenvalues);
  void validate() const;
};

// \sum h(r_n) over the supplied list. Throws OutOfStrip when some |Im r|
// exceeds the pair's strip half-width.
double spectral_side(const SpectralParameters& params, const TestFunctionPair& pair);

// (area / 4 pi) \int r h(r) tanh(pi r) dr.
QuadratureResult identity_term(double area, const TestFunctionPair& pair,
                               const QuadratureOptions& quad = {});

struct HyperbolicTerm {
  double value = 0.0;
  double iterate_tail = 0.0;  // omitted k > k_max terms of listed primitives
  double length_tail = 0.0;   // estimate for primitives beyond the certified length
  double tail_bound() const { return iterate_tail + length_tail; }
};

// \sum_c \sum_{k<=k_max} mult_c l_c g(k l_c) / (2 sinh(k l_c / 2)).
HyperbolicTerm hyperbolic_term(const LengthSpectrum& spectrum, const TestFunctionPair& pair,
                               int k_max, const QuadratureOptions& quad = {});

// Contribution of one elliptic class with rotation parameter theta = pi l / m:
// \int e^{-2 theta r} / (1 + e^{-2 pi r}) h(r) dr.
QuadratureResult elliptic_integral(double theta, const TestFunctionPair& pair,
                                   const QuadratureOptions& quad = {});

// \sum over cone points of order m and l = 1..m-1 of
// elliptic_integral(pi l / m) / (2 m sin(pi l / m)).
QuadratureResult elliptic_term(const std::vector<int>& cone_orders, const TestFunctionPair& pair,
                               const QuadratureOptions& quad = {});

struct GeometricData {
  double area = 0.0;
  LengthSpectrum spectrum;
  std::vector<int> cone_orders;
};

// Enumerates the structure's group (generators required) for its length
// spectrum up to max_length and its cone points.
GeometricData geometric_data(const HyperbolicStructure& structure, double max_length, int depth,
                             const SpectrumOptions& opts = {});

struct GeometricSide {
  double identity = 0.0;
  double hyperbolic = 0.0;
  double elliptic = 0.0;
  double total = 0.0;
  double quadrature_error = 0.0;
  double tail_bound = 0.0;
  double error_budget = 0.0;  // quadrature_error + tail_bound
};

GeometricSide geometric_side(const GeometricData& data, const TestFunctionPair& pair, int k_max,
                             const QuadratureOptions& quad = {});

// Enumerates to the given depth, then evaluates as above.
GeometricSide geometric_side(const HyperbolicStructure& structure, const TestFunctionPair& pair,
                             double max_length, int k_max, int depth,
                             const QuadratureOptions& quad = {});

}  // namespace orbis
