#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "orbis/enumeration.hpp"
#include "orbis/psi.hpp"

namespace orbis {

// One delta of the singular part: coefficient * delta(|t| - position).
struct SingularTerm {
  double position = 0.0;
  double coefficient = 0.0;
  double length = 0.0;  // primitive length l_c
  int iterate = 1;      // k, position = k * l_c
};

struct WaveTraceModel {
  double area = 0.0;
  std::vector<SingularTerm> singular_part;  // ascending by position
  std::vector<int> smooth_orders;           // cone orders, ascending

  // Iterate trains of every spectrum entry with positions up to t_max;
  // coefficients are multiplicity * l / (4 sinh(k l / 2)).
  static WaveTraceModel from_spectrum(double area, const LengthSpectrum& spectrum,
                                      std::vector<int> cone_orders, double t_max);

  // Throws InvalidInput unless positions are positive and ascending and
  // coefficients positive.
  void validate() const;
};

struct TimeGrid {
  double start = 0.0;
  double step = 0.01;
  std::size_t count = 0;

  double t(std::size_t i) const { return start + static_cast<double>(i) * step; }
  double end() const { return count == 0 ? start : t(count - 1); }
  // Points 0, step, ..., up to t_max.
  static TimeGrid half(double t_max, double step);
  // Points -t_max, ..., t_max with 0 on the grid.
  static TimeGrid symmetric(double t_max, double step);
};

struct MollifiedTrace {
  double sigma = 0.0;
  SampledFunction samples;         // variable "t"
  std::vector<std::string> parts;  // subset of identity, singular, smooth
};

// Unit-mass Gaussian of width sigma and its derivative.
double mollifier(double sigma, double t);
double mollifier_derivative(double sigma, double t);

// The identity term of the wave trace paired with the mollifier centred at t:
// the distributional derivative of (area / 4pi) / sinh(s/2), taken as a
// principal value, i.e. (area / 4pi) PV \int rho'_sigma(t - s) / sinh(s/2) ds.
double mollified_identity(double area, double sigma, double t);

struct SynthesisOptions {
  bool identity = true;
  bool singular = true;
  bool smooth = true;
  unsigned threads = 0;  // 0 uses the hardware concurrency
  PsiGridOptions psi;    // sigma is overridden by the trace's sigma
};

// Throws GridTooCoarse when grid.step > sigma / 4.
MollifiedTrace synthesize_mollified(const WaveTraceModel& model, double sigma,
                                    const TimeGrid& grid, const SynthesisOptions& opts = {});

struct Detection {
  double position = 0.0;
  double amplitude = 0.0;  // delta coefficient
};

// Peaks of (trace - identity part) after a second-difference high-pass at
// stride ~sigma, reported when above threshold * (2 pi sigma^2)^{-1/2}.
// Only t > 3 sigma is searched.
std::vector<Detection> detect_singularities(const MollifiedTrace& trace, double area,
                                            double threshold = 1e-3);

// Least-squares fit of amplitude * rho_sigma(t - position) plus a quadratic
// baseline on a +-3 sigma window, starting from a detection.
Detection refine_detection(const MollifiedTrace& trace, const std::vector<double>& residual,
                           const Detection& start);

struct PeelOptions {
  double threshold = 1e-3;
  double rounding_tolerance = 0.2;
  double overlap_sigmas = 4.0;
};

struct PeelResult {
  LengthSpectrum spectrum;
  MollifiedTrace residual;  // trace minus identity minus the subtracted trains
  std::vector<double> residual_norms;  // L2 norm before the first and after each peel
};

// Repeatedly takes the smallest remaining singularity d <= l_max as a primitive
// length, rounds its multiplicity and subtracts the whole iterate train.
// Throws NonIntegerMultiplicity or OverlapUnresolved.
PeelResult peel_off(const MollifiedTrace& trace, double area, double l_max,
                    const PeelOptions& opts = {});

struct InverseOptions {
  PeelOptions peel;
  double r_max = 15.0;
  double r_step = 0.05;
  DecomposeOptions decompose;
};

struct InverseResult {
  LengthSpectrum spectrum;
  std::vector<int> cone_orders;
  int genus = 0;
  SampledFunction cone_sum;  // residual transformed to r
};

// (1/pi) \int_0^T S(t) cos(rt) dt * exp(sigma^2 r^2 / 2), the inverse of
// the Psi convention with the mollifier divided out. Needs a grid starting at 0.
SampledFunction time_to_spectral(const MollifiedTrace& trace, double r_max, double r_step);

// Peels the whole grid, fits the cone orders to the transformed residual and
// solves for the genus. The grid must start at t = 0 and reach far enough for
// the smooth part to have decayed.
InverseResult full_inverse(const MollifiedTrace& trace, double area, int max_order,
                           const InverseOptions& opts = {});

}  // namespace orbis
