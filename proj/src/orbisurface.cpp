#include "orbis/orbisurface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "orbis/error.hpp"

namespace orbis {

namespace {

Rational make_reduced(__int128 num, __int128 den) {
  if (den == 0) throw Error(ErrorCode::InvalidInput, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 a = num < 0 ? -num : num;
  __int128 b = den;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den_ == 0) throw Error(ErrorCode::InvalidInput, "zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const std::int64_t g = std::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& x, const Rational& y) {
  return make_reduced(static_cast<__int128>(x.num_) * y.den_ + static_cast<__int128>(y.num_) * x.den_,
                      static_cast<__int128>(x.den_) * y.den_);
}

Rational operator-(const Rational& x, const Rational& y) {
  return x + Rational(-y.num_, y.den_);
}

std::strong_ordering operator<=>(const Rational& x, const Rational& y) {
  return static_cast<__int128>(x.num_) * y.den_ <=> static_cast<__int128>(y.num_) * x.den_;
}

OrbifoldSignature::OrbifoldSignature(int genus_, std::vector<int> orders)
    : genus(genus_), cone_orders(std::move(orders)) {
  if (genus < 0) throw Error(ErrorCode::InvalidInput, "genus must be nonnegative");
  for (int m : cone_orders) {
    if (m < 2) throw Error(ErrorCode::InvalidInput, "cone orders must be >= 2");
  }
  std::sort(cone_orders.begin(), cone_orders.end());
}

Rational OrbifoldSignature::euler_characteristic() const {
  Rational chi(2 - 2 * static_cast<std::int64_t>(genus));
  for (int m : cone_orders) chi = chi - Rational(m - 1, m);
  return chi;
}

std::optional<std::array<int, 3>> OrbifoldSignature::triangle() const {
  if (genus != 0 || cone_orders.size() != 3) return std::nullopt;
  return std::array<int, 3>{cone_orders[0], cone_orders[1], cone_orders[2]};
}

Rational euler_characteristic(const OrbifoldSignature& sig) {
  return sig.euler_characteristic();
}

double area_gauss_bonnet(const OrbifoldSignature& sig) {
  const Rational chi = sig.euler_characteristic();
  if (!(chi < Rational(0))) {
    throw Error(ErrorCode::NotHyperbolic,
                "orbifold Euler characteristic " + chi.str() + " is not negative");
  }
  return -2.0 * std::numbers::pi * chi.value();
}

int genus_from(double area, const std::vector<int>& cone_orders) {
  if (!(area > 0.0)) throw Error(ErrorCode::InvalidInput, "area must be positive");
  double defect = 0.0;
  for (int m : cone_orders) {
    if (m < 2) throw Error(ErrorCode::InvalidInput, "cone orders must be >= 2");
    defect += 1.0 - 1.0 / m;
  }
  // area / 2pi = 2g - 2 + sum(1 - 1/m)
  const double g = (area / (2.0 * std::numbers::pi) + 2.0 - defect) / 2.0;
  const double rounded = std::round(g);
  if (std::abs(g - rounded) > 1e-6 || rounded < 0.0) {
    throw Error(ErrorCode::Inconsistent,
                "area and cone orders give non-integral genus " + std::to_string(g));
  }
  return static_cast<int>(rounded);
}

HyperbolicStructure make_structure(const OrbifoldSignature& sig,
                                   std::optional<std::vector<Moebius>> generators) {
  HyperbolicStructure s;
  s.signature = sig;
  s.area = area_gauss_bonnet(sig);
  if (generators) {
    s.generators = std::move(generators);
  } else if (auto t = sig.triangle()) {
    const auto g = triangle_group_generators((*t)[0], (*t)[1], (*t)[2]);
    s.generators = std::vector<Moebius>(g.begin(), g.end());
  }
  return s;
}

std::array<Moebius, 3> triangle_group_generators(int p, int q, int r) {
  if (p < 2 || q < 2 || r < 2) {
    throw Error(ErrorCode::InvalidInput, "triangle orders must be >= 2");
  }
  // Exact test of 1/p + 1/q + 1/r < 1.
  const long long lhs = static_cast<long long>(q) * r + static_cast<long long>(p) * r +
                        static_cast<long long>(p) * q;
  if (lhs >= static_cast<long long>(p) * q * r) {
    throw Error(ErrorCode::NotHyperbolic, "1/p + 1/q + 1/r >= 1: triangle is not hyperbolic");
  }
  const double pi = std::numbers::pi;
  const double alpha = pi / p;
  const double beta = pi / q;
  const double gamma = pi / r;

  // Hyperbolic law of cosines for angles gives the sides adjacent to vertex A.
  const double side_ab = std::acosh((std::cos(alpha) * std::cos(beta) + std::cos(gamma)) /
                                    (std::sin(alpha) * std::sin(beta)));
  const double side_ac = std::acosh((std::cos(alpha) * std::cos(gamma) + std::cos(beta)) /
                                    (std::sin(alpha) * std::sin(gamma)));

  // A = i, B straight up the imaginary axis, C reached by turning
  // counter-clockwise through alpha at A.
  const Point va{0.0, 1.0};
  const Point vb{0.0, std::exp(side_ab)};
  const Point vc = act(Moebius::rotation_about_i(alpha), Point{0.0, std::exp(side_ac)});

  return {Moebius::rotation_about(va, 2.0 * alpha), Moebius::rotation_about(vb, 2.0 * beta),
          Moebius::rotation_about(vc, 2.0 * gamma)};
}

}  // namespace orbis
