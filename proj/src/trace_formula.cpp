#include "orbis/trace_formula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "orbis/error.hpp"

namespace orbis {

namespace {

constexpr double kPi = std::numbers::pi;

// Safety factor on the prime-geodesic density e^u / u used for tails.
constexpr double kTailSafety = 8.0;

double compensated_sum(std::initializer_list<double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : xs) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace

SpectralParameters SpectralParameters::from_eigenvalues(const std::vector<double>& eigenvalues) {
  SpectralParameters p;
  for (double lambda : eigenvalues) {
    if (lambda < 0.0) throw Error(ErrorCode::InvalidInput, "eigenvalues must be nonnegative");
    const double shifted = lambda - 0.25;
    p.r_values.push_back(shifted >= 0.0 ? std::complex<double>{std::sqrt(shifted), 0.0}
                                        : std::complex<double>{0.0, std::sqrt(-shifted)});
  }
  return p;
}

void SpectralParameters::validate() const {
  for (const auto& r : r_values) {
    const bool real = r.imag() == 0.0 && r.real() >= 0.0;
    const bool small = r.real() == 0.0 && r.imag() > 0.0 && r.imag() <= 0.5 + 1e-15;
    if (!real && !small) {
      throw Error(ErrorCode::InvalidInput,
                  "spectral parameter must be real >= 0 or i*y with 0 < y <= 1/2");
    }
  }
}

double spectral_side(const SpectralParameters& params, const TestFunctionPair& pair) {
  params.validate();
  double sum = 0.0;
  for (const auto& r : params.r_values) {
    if (std::abs(r.imag()) >= pair.strip_half_width) {
      throw Error(ErrorCode::OutOfStrip, "spectral parameter outside the strip of holomorphy of h");
    }
    sum += pair.h(r).real();
  }
  return sum;
}

QuadratureResult identity_term(double area, const TestFunctionPair& pair,
                               const QuadratureOptions& quad) {
  if (area < 0.0) throw Error(ErrorCode::InvalidInput, "area must be nonnegative");
  if (area == 0.0) return {};
  auto integrand = [&](double r) { return r * pair.h_real(r) * std::tanh(kPi * r); };
  QuadratureOptions scaled = quad;
  const double prefactor = area / (4.0 * kPi);
  scaled.tol = quad.tol / prefactor;
  QuadratureResult q = integrate_real_line(integrand, scaled, 4.0);
  q.value *= prefactor;
  q.error *= prefactor;
  return q;
}

HyperbolicTerm hyperbolic_term(const LengthSpectrum& spectrum, const TestFunctionPair& pair,
                               int k_max, const QuadratureOptions& quad) {
  if (k_max < 1) throw Error(ErrorCode::InvalidInput, "k_max must be >= 1");
  HyperbolicTerm term;
  auto summand = [&](double l, int k) {
    const double kl = k * l;
    return l * pair.g(kl) / (2.0 * std::sinh(kl / 2.0));
  };
  for (const auto& e : spectrum.entries) {
    double s = 0.0;
    for (int k = 1; k <= k_max; ++k) s += summand(e.length, k);
    term.value += e.multiplicity * s;

    double tail = 0.0;
    for (int k = k_max + 1; k < k_max + 100000; ++k) {
      const double v = std::abs(summand(e.length, k));
      tail += v;
      if (v < 1e-20 || (pair.compact_support() && k * e.length > pair.support_radius)) break;
    }
    term.iterate_tail += e.multiplicity * tail;
  }

  // Primitives longer than the certified bound: density e^u / u of oriented
  // primitive geodesics times the k = 1 summand.
  const double from = spectrum.completeness_bound;
  const double to = pair.compact_support() ? pair.support_radius : std::numeric_limits<double>::infinity();
  if (!(from > 0.0)) {
    // Nothing certified: the density diverges at u = 0.
    term.length_tail = std::numeric_limits<double>::infinity();
  } else if (from < to) {
    auto density = [&](double u) {
      return kTailSafety * std::exp(u) * std::abs(pair.g(u)) / (2.0 * std::sinh(u / 2.0));
    };
    QuadratureOptions loose = quad;
    loose.tol = std::max(quad.tol, 1e-14);
    loose.rel_tol = 1e-6;
    if (std::isfinite(to)) {
      term.length_tail = integrate(density, from, to, loose).value;
    } else {
      term.length_tail =
          integrate_half_line([&](double x) { return density(from + x); }, loose, 4.0).value;
    }
  }
  return term;
}

QuadratureResult elliptic_integral(double theta, const TestFunctionPair& pair,
                                   const QuadratureOptions& quad) {
  // e^{-2 theta r} / (1 + e^{-2 pi r}), written without overflow on both sides.
  auto weight = [theta](double r) {
    if (r >= 0.0) return std::exp(-2.0 * theta * r) / (1.0 + std::exp(-2.0 * kPi * r));
    return std::exp((2.0 * kPi - 2.0 * theta) * r) / (1.0 + std::exp(2.0 * kPi * r));
  };
  return integrate_real_line([&](double r) { return weight(r) * pair.h_real(r); }, quad, 4.0);
}

QuadratureResult elliptic_term(const std::vector<int>& cone_orders, const TestFunctionPair& pair,
                               const QuadratureOptions& quad) {
  std::map<int, int> counts;
  for (int m : cone_orders) {
    if (m < 2) throw Error(ErrorCode::InvalidInput, "cone orders must be >= 2");
    counts[m] += 1;
  }
  QuadratureResult total;
  for (const auto& [m, count] : counts) {
    QuadratureResult point;
    for (int l = 1; l < m; ++l) {
      const double theta = kPi * l / m;
      const double prefactor = 1.0 / (2.0 * m * std::sin(theta));
      const QuadratureResult q = elliptic_integral(theta, pair, quad);
      point.value += prefactor * q.value;
      point.error += prefactor * q.error;
      point.evaluations += q.evaluations;
    }
    total.value += count * point.value;
    total.error += count * point.error;
    total.evaluations += point.evaluations;
  }
  return total;
}

GeometricData geometric_data(const HyperbolicStructure& structure, double max_length, int depth,
                             const SpectrumOptions& opts) {
  if (!structure.generators) {
    throw Error(ErrorCode::InvalidInput,
                "structure has no generators; only triangle signatures are built in");
  }
  const auto pres = GroupPresentation::from_generators(*structure.generators);
  GeometricData data;
  data.area = structure.area;
  data.spectrum = length_spectrum(pres, max_length, depth, opts);
  data.cone_orders = cone_points(pres, depth, opts);
  return data;
}

GeometricSide geometric_side(const GeometricData& data, const TestFunctionPair& pair, int k_max,
                             const QuadratureOptions& quad) {
  GeometricSide side;
  const QuadratureResult id = identity_term(data.area, pair, quad);
  const HyperbolicTerm hyp = hyperbolic_term(data.spectrum, pair, k_max, quad);
  const QuadratureResult ell = elliptic_term(data.cone_orders, pair, quad);
  side.identity = id.value;
  side.hyperbolic = hyp.value;
  side.elliptic = ell.value;
  side.total = compensated_sum({id.value, hyp.value, ell.value});
  side.quadrature_error = id.error + ell.error;
  side.tail_bound = hyp.tail_bound();
  side.error_budget = side.quadrature_error + side.tail_bound;
  return side;
}

GeometricSide geometric_side(const HyperbolicStructure& structure, const TestFunctionPair& pair,
                             double max_length, int k_max, int depth,
                             const QuadratureOptions& quad) {
  return geometric_side(geometric_data(structure, max_length, depth), pair, k_max, quad);
}

}  // namespace orbis
