#include "orbis/psi.hpp"

#include <cmath>
#include <numbers>

#include "orbis/error.hpp"

namespace orbis {

namespace {

constexpr double kPi = std::numbers::pi;

void check_order(int m) {
  if (m < 2) throw Error(ErrorCode::InvalidInput, "cone order must be >= 2");
}

// Radius beyond which psi_m < cutoff, from the asymptotic bound with margin.
double cutoff_radius(int m, double cutoff) {
  const double lead = 1.0 / (2.0 * m * std::sin(kPi / m));
  double r = m * std::log(lead / cutoff) / (2.0 * kPi);
  r = std::max(r, 1.0);
  while (psi_value(m, r) > cutoff) r += 1.0;
  return r;
}

}  // namespace

std::vector<double> SampledFunction::grid() const {
  std::vector<double> xs(values.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = x(i);
  return xs;
}

void SampledFunction::validate() const {
  if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start)) {
    throw Error(ErrorCode::InvalidInput, "sample grid needs a positive finite step");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "sample values must be finite");
  }
}

SampledFunction from_samples(std::string variable, std::span<const double> xs,
                             std::vector<double> values) {
  if (xs.size() != values.size()) {
    throw Error(ErrorCode::InvalidInput, "abscissae and values differ in length");
  }
  if (xs.size() < 2) throw Error(ErrorCode::InvalidInput, "need at least two samples");
  SampledFunction f;
  f.variable = std::move(variable);
  f.start = xs.front();
  f.step = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  const double scale = std::max({std::abs(xs.front()), std::abs(xs.back()), 1.0});
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - f.x(i)) > 1e-12 * scale) {
      throw Error(ErrorCode::InvalidInput, "sample grid is not uniform");
    }
  }
  f.values = std::move(values);
  f.validate();
  return f;
}

double psi_value(int m, double r) {
  check_order(m);
  r = std::abs(r);
  const double damp = 1.0 / (1.0 + std::exp(-2.0 * kPi * r));
  double sum = 0.0;
  for (int l = 1; l < m; ++l) {
    const double x = static_cast<double>(l) / m;
    const double pair = std::exp(-2.0 * kPi * r * x) + std::exp(-2.0 * kPi * r * (1.0 - x));
    sum += pair / (4.0 * m * std::sin(kPi * x));
  }
  return sum * damp;
}

double psi_asymptotic(int m, double r) {
  check_order(m);
  return std::exp(-2.0 * kPi * r / m) / (2.0 * m * std::sin(kPi / m));
}

QuadratureResult Psi_time(int m, double t, const QuadratureOptions& quad) {
  check_order(m);
  const double cut = cutoff_radius(m, 1e-18);
  QuadratureOptions half = quad;
  half.tol = quad.tol / 2.0;
  QuadratureResult q = integrate([&](double r) { return psi_value(m, r) * std::cos(r * t); }, 0.0,
                                 cut, half);
  q.value *= 2.0;
  q.error *= 2.0;
  return q;
}

std::vector<double> Psi_on_grid(int m, std::span<const double> ts, const PsiGridOptions& opts,
                                double* error) {
  check_order(m);
  if (!(opts.r_step > 0.0)) throw Error(ErrorCode::InvalidInput, "r_step must be positive");
  const double h = opts.r_step;
  const auto count = static_cast<std::size_t>(std::ceil(cutoff_radius(m, opts.cutoff) / h)) + 1;
  std::vector<double> weights(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double r = static_cast<double>(k) * h;
    weights[k] = psi_value(m, r) * std::exp(-0.5 * opts.sigma * opts.sigma * r * r);
  }
  weights[0] *= 0.5;

  std::vector<double> out(ts.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double c1 = std::cos(h * ts[i]);
    double prev = 1.0;  // cos(0)
    double cur = c1;    // cos(h t)
    double fine = weights[0];
    double coarse = weights[0];
    for (std::size_t k = 1; k < count; ++k) {
      fine += weights[k] * cur;
      if (k % 2 == 0) coarse += weights[k] * cur;
      const double next = 2.0 * c1 * cur - prev;
      prev = cur;
      cur = next;
    }
    out[i] = 2.0 * h * fine;
    worst = std::max(worst, std::abs(out[i] - 4.0 * h * coarse));
  }
  if (error) *error = worst;
  return out;
}

SampledFunction sample_psi_sum(std::span<const int> orders, double start, double step,
                               std::size_t count) {
  SampledFunction f;
  f.variable = "r";
  f.start = start;
  f.step = step;
  f.values.assign(count, 0.0);
  for (int m : orders) {
    for (std::size_t i = 0; i < count; ++i) f.values[i] += psi_value(m, f.x(i));
  }
  return f;
}

}  // namespace orbis
