#include "orbis/wave_trace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <thread>

#include <Eigen/Dense>

#include "orbis/error.hpp"
#include "orbis/orbisurface.hpp"
#include "orbis/quadrature.hpp"

namespace orbis {

namespace {

constexpr double kPi = std::numbers::pi;

// Runs body(begin, end) over contiguous chunks of [0, n) on up to `threads`
// threads. Each index is written by exactly one chunk.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n / 64, 1)));
  if (threads <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned k = 0; k < threads; ++k) {
    const std::size_t lo = k * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

double mollifier_second(double sigma, double x) {
  const double s2 = sigma * sigma;
  return (x * x / (s2 * s2) - 1.0 / s2) * mollifier(sigma, x);
}

std::vector<double> identity_on_grid(double area, double sigma, const SampledFunction& s) {
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = mollified_identity(area, sigma, s.x(i));
  return out;
}

double l2(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

void subtract_train(std::vector<double>& values, const SampledFunction& grid, double sigma,
                    double length, int multiplicity) {
  const double reach = std::max(std::abs(grid.start), std::abs(grid.end())) + 12.0 * sigma;
  for (int k = 1; k * length <= reach; ++k) {
    const double pos = k * length;
    const double coeff = multiplicity * length / (4.0 * std::sinh(pos / 2.0));
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double t = grid.x(i);
      values[i] -= coeff * (mollifier(sigma, t - pos) + mollifier(sigma, t + pos));
    }
  }
}

}  // namespace

WaveTraceModel WaveTraceModel::from_spectrum(double area, const LengthSpectrum& spectrum,
                                             std::vector<int> cone_orders, double t_max) {
  WaveTraceModel model;
  model.area = area;
  for (const auto& e : spectrum.entries) {
    for (int k = 1; k * e.length <= t_max; ++k) {
      const double pos = k * e.length;
      model.singular_part.push_back(
          {pos, e.multiplicity * e.length / (4.0 * std::sinh(pos / 2.0)), e.length, k});
    }
  }
  std::stable_sort(model.singular_part.begin(), model.singular_part.end(),
                   [](const SingularTerm& x, const SingularTerm& y) { return x.position < y.position; });
  std::sort(cone_orders.begin(), cone_orders.end());
  model.smooth_orders = std::move(cone_orders);
  model.validate();
  return model;
}

void WaveTraceModel::validate() const {
  if (!(area >= 0.0)) throw Error(ErrorCode::InvalidInput, "area must be nonnegative");
  double last = 0.0;
  for (const auto& term : singular_part) {
    if (!(term.position > 0.0) || term.position < last) {
      throw Error(ErrorCode::InvalidInput, "singular positions must be positive and ascending");
    }
    if (!(term.coefficient > 0.0)) {
      throw Error(ErrorCode::InvalidInput, "singular coefficients must be positive");
    }
    last = term.position;
  }
  for (int m : smooth_orders) {
    if (m < 2) throw Error(ErrorCode::InvalidInput, "cone orders must be >= 2");
  }
}

TimeGrid TimeGrid::half(double t_max, double step) {
  if (!(step > 0.0) || !(t_max >= 0.0)) throw Error(ErrorCode::InvalidInput, "bad time grid");
  return {0.0, step, static_cast<std::size_t>(std::floor(t_max / step + 1e-9)) + 1};
}

TimeGrid TimeGrid::symmetric(double t_max, double step) {
  if (!(step > 0.0) || !(t_max >= 0.0)) throw Error(ErrorCode::InvalidInput, "bad time grid");
  const auto n = static_cast<std::size_t>(std::floor(t_max / step + 1e-9));
  return {-static_cast<double>(n) * step, step, 2 * n + 1};
}

double mollifier(double sigma, double t) {
  return std::exp(-0.5 * t * t / (sigma * sigma)) / (sigma * std::sqrt(2.0 * kPi));
}

double mollifier_derivative(double sigma, double t) {
  return -t / (sigma * sigma) * mollifier(sigma, t);
}

double mollified_identity(double area, double sigma, double t) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidInput, "sigma must be positive");
  if (area == 0.0) return 0.0;
  t = std::abs(t);
  // Folding s -> -s pairs the two halves of the principal value:
  // PV \int = \int_0^inf (rho'(t - s) - rho'(t + s)) / sinh(s/2) ds.
  auto integrand = [&](double s) {
    if (s < 1e-3 * sigma) return -4.0 * mollifier_second(sigma, t);
    return (mollifier_derivative(sigma, t - s) - mollifier_derivative(sigma, t + s)) /
           std::sinh(s / 2.0);
  };
  const double reach = 12.0 * sigma;
  QuadratureOptions quad;
  quad.tol = 1e-14 * mollifier(sigma, 0.0) / sigma;
  quad.rel_tol = 1e-13;
  const double a = std::max(0.0, t - reach);
  const double b = t + reach;
  double value = 0.0;
  if (t > a) value += integrate(integrand, a, t, quad).value;
  value += integrate(integrand, t, b, quad).value;
  return area / (4.0 * kPi) * value;
}

MollifiedTrace synthesize_mollified(const WaveTraceModel& model, double sigma,
                                    const TimeGrid& grid, const SynthesisOptions& opts) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidInput, "sigma must be positive");
  if (!(grid.step > 0.0) || grid.count == 0) throw Error(ErrorCode::InvalidInput, "empty time grid");
  if (grid.step > sigma / 4.0 * (1.0 + 1e-12)) {
    throw Error(ErrorCode::GridTooCoarse, "grid step must be at most sigma / 4");
  }
  model.validate();

  MollifiedTrace trace;
  trace.sigma = sigma;
  trace.samples.variable = "t";
  trace.samples.start = grid.start;
  trace.samples.step = grid.step;
  trace.samples.values.assign(grid.count, 0.0);
  if (opts.identity) trace.parts.emplace_back("identity");
  if (opts.singular) trace.parts.emplace_back("singular");
  if (opts.smooth) trace.parts.emplace_back("smooth");

  std::vector<double> ts(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) ts[i] = grid.t(i);

  std::map<int, int> orders;
  for (int m : model.smooth_orders) orders[m] += 1;
  PsiGridOptions psi = opts.psi;
  psi.sigma = sigma;

  auto& values = trace.samples.values;
  parallel_for(grid.count, opts.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const double t = ts[i];
      double v = 0.0;
      if (opts.identity) v += mollified_identity(model.area, sigma, t);
      if (opts.singular) {
        for (const auto& term : model.singular_part) {
          v += term.coefficient *
               (mollifier(sigma, t - term.position) + mollifier(sigma, t + term.position));
        }
      }
      values[i] = v;
    }
    if (opts.smooth) {
      const std::span<const double> chunk(ts.data() + lo, hi - lo);
      for (const auto& [m, count] : orders) {
        const auto psi_values = Psi_on_grid(m, chunk, psi);
        for (std::size_t i = lo; i < hi; ++i) values[i] += count * psi_values[i - lo];
      }
    }
  });
  return trace;
}

namespace {

std::vector<Detection> detect_in(const MollifiedTrace& trace, const std::vector<double>& residual,
                                 double threshold) {
  const auto& s = trace.samples;
  const double sigma = trace.sigma;
  const auto stride = static_cast<std::size_t>(std::max(1L, std::lround(sigma / s.step)));
  const double offset = static_cast<double>(stride) * s.step;
  const double response = mollifier(sigma, 0.0) * (1.0 - std::exp(-0.5 * offset * offset / (sigma * sigma)));
  const double floor = threshold * mollifier(sigma, 0.0);

  const std::size_t n = residual.size();
  std::vector<Detection> out;
  if (n < 2 * stride + 3) return out;
  std::vector<double> metric(n, 0.0);
  for (std::size_t i = stride; i + stride < n; ++i) {
    metric[i] = residual[i] - 0.5 * (residual[i - stride] + residual[i + stride]);
  }
  for (std::size_t i = stride + 1; i + stride + 1 < n; ++i) {
    const double t = s.x(i);
    if (t <= 3.0 * sigma) continue;
    const double m0 = metric[i - 1], m1 = metric[i], m2 = metric[i + 1];
    if (!(m1 > m0 && m1 >= m2)) continue;
    if (m1 / response * mollifier(sigma, 0.0) < floor) continue;
    const double curvature = m0 - 2.0 * m1 + m2;
    double shift = 0.0;
    double peak = m1;
    if (curvature < 0.0) {
      shift = 0.5 * (m0 - m2) / curvature;
      peak = m1 - 0.25 * (m0 - m2) * shift;
    }
    out.push_back({t + shift * s.step, peak / response});
  }
  return out;
}

}  // namespace

std::vector<Detection> detect_singularities(const MollifiedTrace& trace, double area,
                                            double threshold) {
  trace.samples.validate();
  std::vector<double> residual = trace.samples.values;
  const auto identity = identity_on_grid(area, trace.sigma, trace.samples);
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= identity[i];
  return detect_in(trace, residual, threshold);
}

Detection refine_detection(const MollifiedTrace& trace, const std::vector<double>& residual,
                           const Detection& start) {
  const auto& s = trace.samples;
  const double sigma = trace.sigma;
  const double half = 3.0 * sigma;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    if (std::abs(s.x(i) - start.position) <= half) idx.push_back(i);
  }
  if (idx.size() < 8) return start;

  const double centre = start.position;
  double amp = start.amplitude;
  double pos = start.position;
  Eigen::VectorXd base = Eigen::VectorXd::Zero(3);
  const auto rows = static_cast<Eigen::Index>(idx.size());
  for (int iter = 0; iter < 50; ++iter) {
    Eigen::MatrixXd jac(rows, 5);
    Eigen::VectorXd res(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double t = s.x(idx[static_cast<std::size_t>(r)]);
      const double x = (t - centre) / sigma;
      const double rho = mollifier(sigma, t - pos);
      const double model = amp * rho + base[0] + base[1] * x + base[2] * x * x;
      res[r] = residual[idx[static_cast<std::size_t>(r)]] - model;
      jac(r, 0) = rho;
      jac(r, 1) = amp * (t - pos) / (sigma * sigma) * rho;
      jac(r, 2) = 1.0;
      jac(r, 3) = x;
      jac(r, 4) = x * x;
    }
    const Eigen::VectorXd delta = jac.colPivHouseholderQr().solve(res);
    amp += delta[0];
    pos += std::clamp(delta[1], -sigma, sigma);
    base += delta.tail(3);
    if (std::abs(delta[1]) < 1e-14 * std::max(1.0, std::abs(pos)) &&
        std::abs(delta[0]) < 1e-14 * std::max(1.0, std::abs(amp))) {
      break;
    }
  }
  return {pos, amp};
}

PeelResult peel_off(const MollifiedTrace& trace, double area, double l_max,
                    const PeelOptions& opts) {
  trace.samples.validate();
  PeelResult result;
  result.residual = trace;
  auto& values = result.residual.samples.values;
  const auto identity = identity_on_grid(area, trace.sigma, trace.samples);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= identity[i];
  result.residual.parts.erase(
      std::remove(result.residual.parts.begin(), result.residual.parts.end(), "identity"),
      result.residual.parts.end());
  result.residual_norms.push_back(l2(values));

  const double sigma = trace.sigma;
  while (true) {
    const auto found = detect_in(result.residual, values, opts.threshold);
    auto next = std::find_if(found.begin(), found.end(),
                             [&](const Detection& d) { return d.position <= l_max; });
    if (next == found.end()) break;

    const Detection fit = refine_detection(result.residual, values, *next);
    const double length = fit.position;
    const double unit = length / (4.0 * std::sinh(length / 2.0));
    const double ratio = fit.amplitude / unit;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(ratio - n) > opts.rounding_tolerance) {
      throw Error(ErrorCode::NonIntegerMultiplicity,
                  "amplitude at t = " + std::to_string(length) + " is " + std::to_string(ratio) +
                      " primitive units");
    }
    for (const auto& e : result.spectrum.entries) {
      if (std::abs(e.length - length) < opts.overlap_sigmas * sigma) {
        throw Error(ErrorCode::OverlapUnresolved,
                    "lengths " + std::to_string(e.length) + " and " + std::to_string(length) +
                        " are closer than the mollifier resolves");
      }
    }
    const int mult = static_cast<int>(n);
    subtract_train(values, result.residual.samples, sigma, length, mult);
    result.spectrum.entries.push_back({length, mult, ""});
    result.residual_norms.push_back(l2(values));
  }
  std::sort(result.spectrum.entries.begin(), result.spectrum.entries.end(),
            [](const SpectrumEntry& x, const SpectrumEntry& y) { return x.length < y.length; });
  result.spectrum.completeness_bound = l_max;
  return result;
}

SampledFunction time_to_spectral(const MollifiedTrace& trace, double r_max, double r_step) {
  const auto& s = trace.samples;
  s.validate();
  if (!(r_step > 0.0) || !(r_max >= 0.0)) throw Error(ErrorCode::InvalidInput, "bad r grid");
  const double first = -s.start / s.step;
  const auto i0 = static_cast<long>(std::lround(first));
  if (i0 < 0 || std::abs(first - static_cast<double>(i0)) > 1e-6 ||
      static_cast<std::size_t>(i0) + 1 >= s.size()) {
    throw Error(ErrorCode::InvalidInput, "time grid must contain t = 0");
  }
  const auto n = static_cast<std::size_t>(std::floor(r_max / r_step + 1e-9)) + 1;
  SampledFunction out;
  out.variable = "r";
  out.start = 0.0;
  out.step = r_step;
  out.values.resize(n);
  const auto first_index = static_cast<std::size_t>(i0);
  for (std::size_t j = 0; j < n; ++j) {
    const double r = out.x(j);
    const double c1 = std::cos(r * s.step);
    double prev = 1.0, cur = c1;
    double sum = 0.5 * s.values[first_index];
    for (std::size_t i = first_index + 1; i < s.size(); ++i) {
      const double w = (i + 1 == s.size()) ? 0.5 : 1.0;
      sum += w * s.values[i] * cur;
      const double next = 2.0 * c1 * cur - prev;
      prev = cur;
      cur = next;
    }
    out.values[j] = sum * s.step / kPi * std::exp(0.5 * trace.sigma * trace.sigma * r * r);
  }
  return out;
}

InverseResult full_inverse(const MollifiedTrace& trace, double area, int max_order,
                           const InverseOptions& opts) {
  PeelResult peeled = peel_off(trace, area, trace.samples.end(), opts.peel);
  InverseResult out;
  out.spectrum = std::move(peeled.spectrum);
  out.cone_sum = time_to_spectral(peeled.residual, opts.r_max, opts.r_step);
  out.cone_orders = decompose_cone_sum(out.cone_sum, max_order, FitMode::Noisy, opts.decompose);
  out.genus = genus_from(area, out.cone_orders);
  return out;
}

}  // namespace orbis
