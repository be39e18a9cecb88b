#include "orbis/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "orbis/error.hpp"

namespace orbis {

namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

double neumaier_sum(const std::vector<double>& values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double cut_radius(const Integrand& f, double start, double tail_tol, bool two_sided) {
  double r = start;
  for (int i = 0; i < 60; ++i) {
    double edge = std::abs(f(r));
    if (two_sided) edge = std::max(edge, std::abs(f(-r)));
    if (edge < tail_tol) return r;
    r *= 2.0;
  }
  throw Error(ErrorCode::QuadratureFailure, "integrand does not decay on the real line");
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& opts) {
  if (a == b) return {};
  std::priority_queue<Panel> panels;
  panels.push(gauss_kronrod(f, a, b));
  double total_error = panels.top().error;
  double total_value = panels.top().value;
  int evaluations = 15;

  auto target = [&] { return std::max(opts.tol, opts.rel_tol * std::abs(total_value)); };

  while (total_error > target() && static_cast<int>(panels.size()) < opts.max_intervals) {
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      panels.push(worst);
      break;  // cannot subdivide further in double precision
    }
    const Panel left = gauss_kronrod(f, worst.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.b);
    evaluations += 30;
    total_error += left.error + right.error - worst.error;
    total_value += left.value + right.value - worst.value;
    panels.push(left);
    panels.push(right);
  }

  // Recompute the totals in position order so the result does not depend on
  // heap layout.
  std::vector<Panel> all;
  all.reserve(panels.size());
  while (!panels.empty()) {
    all.push_back(panels.top());
    panels.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  std::vector<double> values;
  std::vector<double> errors;
  values.reserve(all.size());
  errors.reserve(all.size());
  for (const Panel& p : all) {
    values.push_back(p.value);
    errors.push_back(p.error);
  }
  QuadratureResult result{neumaier_sum(values), neumaier_sum(errors), evaluations};
  if (!std::isfinite(result.value) ||
      result.error > std::max(opts.tol, opts.rel_tol * std::abs(result.value))) {
    throw Error(ErrorCode::QuadratureFailure,
                "quadrature error estimate " + std::to_string(result.error) +
                    " exceeds tolerance " + std::to_string(opts.tol));
  }
  return result;
}

QuadratureResult integrate_real_line(const Integrand& f, const QuadratureOptions& opts,
                                     double start_radius) {
  const double r = cut_radius(f, start_radius, opts.tail_tol, true);
  QuadratureOptions half = opts;
  half.tol = opts.tol / 2.0;
  const QuadratureResult left = integrate(f, -r, 0.0, half);
  const QuadratureResult right = integrate(f, 0.0, r, half);
  return {left.value + right.value, left.error + right.error,
          left.evaluations + right.evaluations};
}

QuadratureResult integrate_half_line(const Integrand& f, const QuadratureOptions& opts,
                                     double start_radius) {
  const double r = cut_radius(f, start_radius, opts.tail_tol, false);
  return integrate(f, 0.0, r, opts);
}

}  // namespace orbis
