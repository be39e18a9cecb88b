#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <variant>

namespace orbis {

using Point = std::complex<double>;

// Element of PSL(2,R): a real unit-determinant 2x2 matrix taken modulo sign.
// Values produced by the functions below are canonical: det = 1 and
// trace >= 0, with the first nonzero entry positive when the trace vanishes.
struct Moebius {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 1.0;

  static Moebius identity() { return {}; }
  // One-parameter group diag(e^{t/2}, e^{-t/2}); translates along the
  // imaginary axis by hyperbolic distance t.
  static Moebius geodesic_flow(double t);
  // Counter-clockwise rotation about i by `angle`.
  static Moebius rotation_about_i(double angle);
  // Counter-clockwise rotation about an arbitrary point of the half-plane.
  static Moebius rotation_about(Point center, double angle);

  double trace() const { return a + d; }
  // ad - bc with Kahan's fma correction, accurate even when ad ~ bc >> 1.
  double det() const {
    const double bc = b * c;
    return std::fma(a, d, -bc) + std::fma(-b, c, bc);
  }
  Moebius inverse() const { return {d, -b, -c, a}; }
};

Moebius canonicalize(const Moebius& m);
Moebius compose(const Moebius& g, const Moebius& h);
Moebius power(const Moebius& g, int k);
Moebius conjugate(const Moebius& g, const Moebius& by);  // by * g * by^-1

Point act(const Moebius& g, Point z);

// Max-entry distance between the classes of g and h in PSL(2,R).
double psl_distance(const Moebius& g, const Moebius& h);
// Hyperbolic distance between two points of the upper half-plane.
double hyperbolic_distance(Point z, Point w);

struct IdentityKind {};
struct EllipticKind {
  double angle = 0.0;     // theta with |trace| = 2 |cos theta|, in (0, pi/2]
  double rotation = 0.0;  // signed counter-clockwise rotation, in (0, 2 pi)
  std::optional<int> order;
  Point center;
};
struct ParabolicKind {};
struct HyperbolicKind {
  double length = 0.0;
  double norm = 1.0;  // e^length
};

using IsometryKind =
    std::variant<IdentityKind, EllipticKind, ParabolicKind, HyperbolicKind>;

struct ClassifyOptions {
  double eps = 1e-9;       // half-width of the parabolic band around |tr| = 2
  bool cocompact = false;  // reject parabolic hits with ParabolicInCocompact
  int max_order = 1000;    // largest elliptic order searched for
};

IsometryKind classify(const Moebius& g, const ClassifyOptions& opts = {});

bool is_hyperbolic(const IsometryKind& kind);
bool is_elliptic(const IsometryKind& kind);

// The unique hyperbolic element with the same axis as g and 1/k of its
// translation length. g must be hyperbolic.
Moebius hyperbolic_root(const Moebius& g, int k);

// Rotation by `angle` about the fixed point of the elliptic element g.
Moebius rotation_with_center_of(const Moebius& g, double angle);

bool approx_conjugate(const Moebius& g, const Moebius& h,
                      std::span<const Moebius> conjugators, double tol);

}  // namespace orbis
