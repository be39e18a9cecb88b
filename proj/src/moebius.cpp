#include "orbis/moebius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "orbis/error.hpp"

namespace orbis {

namespace {

constexpr double kIdentityTol = 1e-8;

double max_abs_entry(const Moebius& m) {
  return std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
}

Moebius negated(const Moebius& m) { return {-m.a, -m.b, -m.c, -m.d}; }

Moebius raw_product(const Moebius& g, const Moebius& h) {
  return {g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
          g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d};
}

// Representative with c < 0; for elliptic elements this is the sign in which
// the matrix reads cos(phi/2) I + sin(phi/2) J with phi the ccw rotation.
Moebius with_negative_c(const Moebius& m) { return m.c < 0.0 ? m : negated(m); }

}  // namespace

Moebius Moebius::geodesic_flow(double t) {
  return {std::exp(t / 2.0), 0.0, 0.0, std::exp(-t / 2.0)};
}

Moebius Moebius::rotation_about_i(double angle) {
  const double co = std::cos(angle / 2.0);
  const double si = std::sin(angle / 2.0);
  return canonicalize({co, si, -si, co});
}

Moebius Moebius::rotation_about(Point center, double angle) {
  if (!(center.imag() > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "rotation center must lie in the upper half-plane");
  }
  const double s = std::sqrt(center.imag());
  const Moebius move{s, center.real() / s, 0.0, 1.0 / s};
  return conjugate(rotation_about_i(angle), move);
}

Moebius canonicalize(const Moebius& m) {
  const double det = m.det();
  const double size = max_abs_entry(m);
  if (!std::isfinite(det) || !std::isfinite(size)) {
    throw Error(ErrorCode::InvalidInput, "matrix entries must be finite");
  }
  // Products of unimodular matrices keep det = 1 up to the rounding of
  // ad - bc; rescaling by that noise would only damage large entries.
  Moebius out = m;
  if (std::abs(det - 1.0) > 64.0 * std::numeric_limits<double>::epsilon() * size * size) {
    if (!(det > 0.0)) {
      throw Error(ErrorCode::InvalidInput, "matrix determinant must be positive");
    }
    const double s = std::sqrt(det);
    out = {m.a / s, m.b / s, m.c / s, m.d / s};
  }
  const double zero_band = 1e-9 * std::max(1.0, max_abs_entry(out));
  const double tr = out.trace();
  if (std::abs(tr) > zero_band) {
    return tr < 0.0 ? negated(out) : out;
  }
  for (double entry : {out.a, out.b, out.c, out.d}) {
    if (std::abs(entry) > zero_band) {
      return entry < 0.0 ? negated(out) : out;
    }
  }
  return out;
}

Moebius compose(const Moebius& g, const Moebius& h) {
  return canonicalize(raw_product(g, h));
}

Moebius power(const Moebius& g, int k) {
  if (k < 0) return power(g.inverse(), -k);
  Moebius result = Moebius::identity();
  Moebius base = g;
  while (k > 0) {
    if (k & 1) result = compose(result, base);
    k >>= 1;
    if (k > 0) base = compose(base, base);
  }
  return result;
}

Moebius conjugate(const Moebius& g, const Moebius& by) {
  return canonicalize(raw_product(raw_product(by, g), by.inverse()));
}

Point act(const Moebius& g, Point z) { return (g.a * z + g.b) / (g.c * z + g.d); }

double psl_distance(const Moebius& g, const Moebius& h) {
  const double plus = std::max({std::abs(g.a - h.a), std::abs(g.b - h.b),
                                std::abs(g.c - h.c), std::abs(g.d - h.d)});
  const double minus = std::max({std::abs(g.a + h.a), std::abs(g.b + h.b),
                                 std::abs(g.c + h.c), std::abs(g.d + h.d)});
  return std::min(plus, minus);
}

double hyperbolic_distance(Point z, Point w) {
  const double arg = 1.0 + std::norm(z - w) / (2.0 * z.imag() * w.imag());
  return std::acosh(std::max(1.0, arg));
}

IsometryKind classify(const Moebius& g, const ClassifyOptions& opts) {
  const Moebius m = canonicalize(g);
  const double tr = std::abs(m.trace());

  if (psl_distance(m, Moebius::identity()) <= kIdentityTol) return IdentityKind{};

  if (std::abs(tr - 2.0) <= opts.eps) {
    if (opts.cocompact) {
      throw Error(ErrorCode::ParabolicInCocompact,
                  "element with |trace| = 2 in a group asserted to be cocompact");
    }
    return ParabolicKind{};
  }

  if (tr > 2.0) {
    const double length = 2.0 * std::acosh(tr / 2.0);
    return HyperbolicKind{length, std::exp(length)};
  }

  EllipticKind e;
  e.angle = std::acos(tr / 2.0);
  const Moebius s = with_negative_c(m);
  e.rotation = 2.0 * std::acos(std::clamp(s.trace() / 2.0, -1.0, 1.0));
  const double root = std::sqrt(std::max(0.0, 4.0 - tr * tr));
  e.center = Point{(s.a - s.d) / (2.0 * s.c), -root / (2.0 * s.c)};

  const double turns = e.rotation / (2.0 * std::numbers::pi);
  for (int n = 2; n <= opts.max_order; ++n) {
    const double x = n * turns;
    if (std::abs(x - std::round(x)) <= 1e-7) {
      e.order = n;
      break;
    }
  }
  return e;
}

bool is_hyperbolic(const IsometryKind& kind) {
  return std::holds_alternative<HyperbolicKind>(kind);
}

bool is_elliptic(const IsometryKind& kind) {
  return std::holds_alternative<EllipticKind>(kind);
}

Moebius hyperbolic_root(const Moebius& g, int k) {
  const Moebius m = canonicalize(g);
  const double half_trace = m.trace() / 2.0;
  if (!(half_trace > 1.0) || k < 1) {
    throw Error(ErrorCode::InvalidInput, "hyperbolic_root needs a hyperbolic element and k >= 1");
  }
  const double half_length = std::acosh(half_trace);
  const double sh = std::sinh(half_length);
  // m = cosh(l/2) I + sinh(l/2) N with N traceless and N^2 = I.
  const Moebius n{(m.a - half_trace) / sh, m.b / sh, m.c / sh, (m.d - half_trace) / sh};
  const double rc = std::cosh(half_length / k);
  const double rs = std::sinh(half_length / k);
  return canonicalize({rc + rs * n.a, rs * n.b, rs * n.c, rc + rs * n.d});
}

Moebius rotation_with_center_of(const Moebius& g, double angle) {
  const Moebius s = with_negative_c(canonicalize(g));
  const double half_cos = s.trace() / 2.0;
  if (!(std::abs(half_cos) < 1.0)) {
    throw Error(ErrorCode::InvalidInput, "rotation_with_center_of needs an elliptic element");
  }
  const double half_sin = std::sqrt(1.0 - half_cos * half_cos);
  // s = cos(phi/2) I + sin(phi/2) J with J^2 = -I.
  const Moebius j{(s.a - half_cos) / half_sin, s.b / half_sin, s.c / half_sin,
                  (s.d - half_cos) / half_sin};
  const double co = std::cos(angle / 2.0);
  const double si = std::sin(angle / 2.0);
  return canonicalize({co + si * j.a, si * j.b, si * j.c, co + si * j.d});
}

bool approx_conjugate(const Moebius& g, const Moebius& h,
                      std::span<const Moebius> conjugators, double tol) {
  const Moebius cg = canonicalize(g);
  const Moebius ch = canonicalize(h);
  if (std::abs(std::abs(cg.trace()) - std::abs(ch.trace())) > tol) return false;
  return std::any_of(conjugators.begin(), conjugators.end(), [&](const Moebius& w) {
    return psl_distance(conjugate(cg, w), ch) <= tol;
  });
}

}  // namespace orbis
