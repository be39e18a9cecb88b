#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "orbis/error.hpp"
#include "orbis/moebius.hpp"

using namespace orbis;

namespace {

constexpr double kPi = std::numbers::pi;

// Random element of norm at most ~e^3: rotation, flow, rotation.
Moebius random_element(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi), len(0.0, 3.0);
  return compose(compose(Moebius::rotation_about_i(angle(rng)), Moebius::geodesic_flow(len(rng))),
                 Moebius::rotation_about_i(angle(rng)));
}

double length_of(const Moebius& g) { return std::get<HyperbolicKind>(classify(g)).length; }

}  // namespace

TEST_SUITE("hyperbolic-core") {
  TEST_CASE("compose: identity, flow group law, involution") {
    std::mt19937_64 rng(11);
    const Moebius g = random_element(rng);
    CHECK(psl_distance(compose(Moebius::identity(), g), g) < 1e-15);

    const Moebius st = compose(Moebius::geodesic_flow(0.7), Moebius::geodesic_flow(1.9));
    CHECK(psl_distance(st, Moebius::geodesic_flow(2.6)) < 1e-14);

    const Moebius r = Moebius::rotation_about(Point(0.3, 1.7), kPi);  // order 2
    const Moebius rr = compose(r, r);
    CHECK(psl_distance(rr, Moebius::identity()) < 1e-12);
    CHECK(rr.trace() > 0.0);
  }

  TEST_CASE("classify examples") {
    const auto flow = classify(Moebius{std::exp(0.5), 0.0, 0.0, std::exp(-0.5)});
    REQUIRE(is_hyperbolic(flow));
    CHECK(std::get<HyperbolicKind>(flow).length == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::get<HyperbolicKind>(flow).norm == doctest::Approx(std::exp(1.0)).epsilon(1e-14));

    // Rotation about i by 2pi/3 written out: [[cos, sin], [-sin, cos]] of pi/3.
    const Moebius rot{std::cos(kPi / 3), std::sin(kPi / 3), -std::sin(kPi / 3), std::cos(kPi / 3)};
    const auto ell = classify(canonicalize(rot));
    REQUIRE(is_elliptic(ell));
    const auto& e = std::get<EllipticKind>(ell);
    CHECK(e.angle == doctest::Approx(kPi / 3).epsilon(1e-12));
    REQUIRE(e.order.has_value());
    CHECK(*e.order == 3);
    CHECK(std::abs(e.center - Point(0.0, 1.0)) < 1e-12);

    CHECK(std::holds_alternative<IdentityKind>(classify(Moebius::identity())));
    const Moebius parabolic{1.0, 1.0, 0.0, 1.0};
    CHECK(std::holds_alternative<ParabolicKind>(classify(parabolic)));
    ClassifyOptions strict;
    strict.cocompact = true;
    try {
      classify(parabolic, strict);
      FAIL("expected ParabolicInCocompact");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::ParabolicInCocompact);
    }
  }

  TEST_CASE("classify thresholds are configurable") {
    const Moebius near{1.0 + 1e-6, 1.0, 1e-6, 1.0};  // trace just above 2
    ClassifyOptions wide;
    wide.eps = 1e-3;
    CHECK(std::holds_alternative<ParabolicKind>(classify(canonicalize(near), wide)));
    CHECK(is_hyperbolic(classify(canonicalize(near))));
  }

  TEST_CASE("act") {
    const Point z(0.4, 2.0);
    CHECK(std::abs(act(Moebius::identity(), z) - z) < 1e-15);
    const double t = 1.3;
    CHECK(std::abs(act(Moebius::geodesic_flow(t), Point(0.0, 1.0)) - Point(0.0, std::exp(t))) < 1e-12);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) CHECK(act(random_element(rng), Point(0.0, 2.0)).imag() > 0.0);
  }

  TEST_CASE("power") {
    std::mt19937_64 rng(5);
    const Moebius g = random_element(rng);
    CHECK(psl_distance(power(g, 1), g) < 1e-15);
    const Moebius r7 = Moebius::rotation_about(Point(-0.2, 0.8), 2.0 * kPi / 7.0);
    CHECK(psl_distance(power(r7, 7), Moebius::identity()) < 1e-12);
    const Moebius a1 = Moebius::geodesic_flow(1.0);
    CHECK(length_of(power(a1, 3)) == doctest::Approx(3.0).epsilon(1e-10));
  }

  TEST_CASE("approx_conjugate") {
    std::mt19937_64 rng(9);
    const Moebius g = compose(Moebius::geodesic_flow(1.0), Moebius::rotation_about_i(0.0));
    const Moebius w = random_element(rng);
    const std::vector<Moebius> just_identity{Moebius::identity()};
    const std::vector<Moebius> with_w{Moebius::identity(), w};
    CHECK(approx_conjugate(g, g, just_identity, 1e-9));
    CHECK(approx_conjugate(g, conjugate(g, w), with_w, 1e-9));
    CHECK_FALSE(approx_conjugate(g, conjugate(g, w), just_identity, 1e-9));
    CHECK_FALSE(approx_conjugate(Moebius::geodesic_flow(1.0), Moebius::geodesic_flow(2.0), with_w, 1e-9));
  }

  TEST_CASE("property: associativity on random triples") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 500; ++i) {
      const Moebius x = random_element(rng), y = random_element(rng), z = random_element(rng);
      CHECK(psl_distance(compose(compose(x, y), z), compose(x, compose(y, z))) < 1e-10);
    }
  }

  TEST_CASE("property: length of powers") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
      const Moebius g = random_element(rng);
      const auto kind = classify(g);
      if (!is_hyperbolic(kind)) continue;
      const double l = std::get<HyperbolicKind>(kind).length;
      if (l < 0.05) continue;
      for (int k = 2; k <= 10; ++k) {
        CHECK(length_of(power(g, k)) == doctest::Approx(k * l).epsilon(1e-9 / (k * l) + 1e-12));
      }
    }
  }

  TEST_CASE("property: hyperbolic elements displace every point by at least their length") {
    const Moebius g = compose(compose(Moebius::rotation_about_i(0.4), Moebius::geodesic_flow(1.2)),
                              Moebius::rotation_about_i(-0.4));
    const double l = length_of(g);
    double least = 1e9;
    for (int i = -20; i <= 20; ++i) {
      for (int j = 1; j <= 40; ++j) {
        const Point z(0.1 * i, 0.05 * j);
        least = std::min(least, hyperbolic_distance(z, act(g, z)));
      }
    }
    CHECK(least >= l - 1e-9);
    CHECK(least <= l + 1e-2);
  }

  TEST_CASE("property: canonicalization") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 200; ++i) {
      const Moebius g = random_element(rng), h = random_element(rng);
      const Moebius cg = canonicalize(g);
      CHECK(psl_distance(canonicalize(cg), cg) == 0.0);
      CHECK(cg.trace() >= 0.0);
      CHECK(std::abs(cg.det() - 1.0) <= 1e-12);
      const Moebius raw{g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d, g.c * h.a + g.d * h.c,
                        g.c * h.b + g.d * h.d};
      CHECK(psl_distance(compose(canonicalize(g), canonicalize(h)), canonicalize(raw)) < 1e-12);
    }
    // Zero trace: first nonzero entry positive.
    const Moebius z = canonicalize(Moebius{0.0, -1.0, 1.0, 0.0});
    CHECK(z.b == 1.0);
    // Unnormalized input is scaled to det 1.
    const Moebius s = canonicalize(Moebius{2.0, 0.0, 0.0, 2.0});
    CHECK(psl_distance(s, Moebius::identity()) < 1e-15);
    CHECK_THROWS_AS(canonicalize(Moebius{1.0, 2.0, 3.0, 4.0}), Error);
  }

  TEST_CASE("roots and rotations about a common centre") {
    const Moebius g = conjugate(Moebius::geodesic_flow(4.2), Moebius::rotation_about(Point(1.0, 2.0), 0.3));
    const Moebius root = hyperbolic_root(g, 3);
    CHECK(psl_distance(power(root, 3), g) < 1e-12);
    CHECK(length_of(root) == doctest::Approx(1.4).epsilon(1e-12));

    const Moebius r = Moebius::rotation_about(Point(0.5, 0.7), 2.0 * kPi / 5.0);
    const Moebius r2 = rotation_with_center_of(compose(r, r), 2.0 * kPi / 5.0);
    CHECK(psl_distance(r2, r) < 1e-12);
  }
}
