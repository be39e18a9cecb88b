#pragma once

#include <span>
#include <string>
#include <vector>

#include "orbis/quadrature.hpp"

namespace orbis {

// Samples on the uniform grid start, start + step, ... tagged with the name
// of the variable ("r" or "t").
struct SampledFunction {
  std::string variable = "r";
  double start = 0.0;
  double step = 0.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double x(std::size_t i) const { return start + static_cast<double>(i) * step; }
  double end() const { return values.empty() ? start : x(values.size() - 1); }
  std::vector<double> grid() const;

  // Throws InvalidInput unless step > 0 and all values are finite.
  void validate() const;
};

// Builds a SampledFunction from explicit abscissae; throws InvalidInput when
// they are not uniform within 1e-12 (relative to the range).
SampledFunction from_samples(std::string variable, std::span<const double> xs,
                             std::vector<double> values);

// psi_m(r) = sum_{l=1}^{m-1} (e^{-2pi r l/m}/(1+e^{-2pi r}) + e^{2pi r l/m}/(1+e^{2pi r}))
//            / (4 m sin(pi l/m))
double psi_value(int m, double r);

// (2 m sin(pi/m))^{-1} e^{-2 pi r/m}
double psi_asymptotic(int m, double r);

// Psi_m(t) = \int psi_m(r) e^{irt} dr, the convention matching the trace
// formula pairing, by adaptive quadrature.
QuadratureResult Psi_time(int m, double t, const QuadratureOptions& quad = {});

struct PsiGridOptions {
  double r_step = 0.025;
  double cutoff = 1e-17;  // psi_m is dropped below this value
  double sigma = 0.0;     // Gaussian mollifier width in t; 0 for none
};

// Psi_m (convolved with the unit-mass Gaussian of width sigma when sigma > 0)
// at every t, by the trapezoid rule in r. When error is non-null it receives
// the largest difference against the rule with twice the step.
std::vector<double> Psi_on_grid(int m, std::span<const double> ts, const PsiGridOptions& opts = {},
                                double* error = nullptr);

// Samples of sum_m psi_m over orders (with repetition).
SampledFunction sample_psi_sum(std::span<const int> orders, double start, double step,
                               std::size_t count);

enum class FitMode { Exact, Noisy };

struct DecomposeOptions {
  int max_count = 6;  // per-order multiplicity searched
  double exact_threshold = 1e-8;
  double noisy_threshold = 1e-5;
  std::size_t node_budget = 50'000'000;
};

struct ConeFit {
  std::vector<int> orders;  // multiset, ascending
  double residual = 0.0;
  double runner_up = 0.0;   // residual of the best other integer vector
};

// Nonnegative integer counts c_2..c_max_order minimizing ||S - sum c_m psi_m||_2
// on the sample grid. Requires variable "r", start >= 0, end >= 15 and
// step <= 0.1. Throws AmbiguousFit when the runner-up is within a factor 2
// of the best, NonIntegerFit when the best misses threshold * max(||S||, 1).
ConeFit fit_cone_sum(const SampledFunction& S, int max_order, FitMode mode,
                     const DecomposeOptions& opts = {});

std::vector<int> decompose_cone_sum(const SampledFunction& S, int max_order, FitMode mode,
                                    const DecomposeOptions& opts = {});

}  // namespace orbis
