#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbis/moebius.hpp"

namespace orbis {

// Reduced fraction with positive denominator.
class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;  // "-1/42", or "-2" for integers

  friend Rational operator+(const Rational& x, const Rational& y);
  friend Rational operator-(const Rational& x, const Rational& y);
  friend bool operator==(const Rational& x, const Rational& y) = default;
  friend std::strong_ordering operator<=>(const Rational& x, const Rational& y);

 private:
  std::int64_t num_;
  std::int64_t den_;
};

// Genus of the underlying surface plus the multiset of cone orders
// (kept sorted ascending).
struct OrbifoldSignature {
  int genus = 0;
  std::vector<int> cone_orders;

  OrbifoldSignature() = default;
  OrbifoldSignature(int genus, std::vector<int> cone_orders);

  Rational euler_characteristic() const;
  bool is_hyperbolic() const { return euler_characteristic() < Rational(0); }
  std::optional<std::array<int, 3>> triangle() const;

  friend bool operator==(const OrbifoldSignature&, const OrbifoldSignature&) = default;
};

struct HyperbolicStructure {
  OrbifoldSignature signature;
  double area = 0.0;
  std::optional<std::vector<Moebius>> generators;
};

Rational euler_characteristic(const OrbifoldSignature& sig);

// Area of a curvature -1 metric: -2 pi chi. Throws NotHyperbolic when chi >= 0.
double area_gauss_bonnet(const OrbifoldSignature& sig);

// Genus g solving area = -2 pi [(2 - 2g) - sum(1 - 1/m)]; accepted when the
// solution lies within 1e-6 of a nonnegative integer, Inconsistent otherwise.
int genus_from(double area, const std::vector<int>& cone_orders);

// Builds the structure, filling in triangle-group generators when the
// signature is a triangle signature and none are supplied.
HyperbolicStructure make_structure(const OrbifoldSignature& sig,
                                   std::optional<std::vector<Moebius>> generators = std::nullopt);

// Rotations R1, R2, R3 by 2pi/p, 2pi/q, 2pi/r about the vertices of a
// hyperbolic triangle with angles pi/p, pi/q, pi/r, with R1 R2 R3 = 1.
std::array<Moebius, 3> triangle_group_generators(int p, int q, int r);

}  // namespace orbis
