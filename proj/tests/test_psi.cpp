#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "orbis/error.hpp"
#include "orbis/io.hpp"
#include "orbis/psi.hpp"

using namespace orbis;
using std::numbers::pi;

namespace {

SampledFunction standard_grid(std::vector<int> orders) {
  return sample_psi_sum(orders, 0.0, 0.05, 301);
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST_SUITE("psi-functions") {
  TEST_CASE("psi_value examples") {
    CHECK(psi_value(2, 0.0) == doctest::Approx(0.125).epsilon(1e-15));
    for (int m = 2; m <= 12; ++m) {
      for (double r : {0.0, 0.3, 1.7, 4.0, 9.5, 20.0}) {
        CHECK(psi_value(m, r) == doctest::Approx(static_cast<double>(oracle::psi_direct(m, r))).epsilon(1e-12));
        CHECK(psi_value(m, -r) == doctest::Approx(psi_value(m, r)).epsilon(1e-14));
      }
    }
    CHECK(psi_value(7, 10.0) / psi_asymptotic(7, 10.0) == doctest::Approx(1.0).epsilon(1e-3));
    // Large r neither overflows nor underflows to garbage.
    CHECK(std::isfinite(psi_value(12, 200.0)));
    CHECK(psi_value(12, 200.0) > 0);
  }

  TEST_CASE("psi_asymptotic") {
    CHECK(psi_asymptotic(2, 0.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(psi_asymptotic(7, 10.0) > psi_asymptotic(2, 10.0));
    for (int m = 2; m <= 10; ++m) {
      double previous = std::abs(psi_value(m, 5.0) / psi_asymptotic(m, 5.0) - 1);
      for (double r = 5.5; r <= 30.0 && previous > 1e-12; r += 0.5) {
        const double gap = std::abs(psi_value(m, r) / psi_asymptotic(m, r) - 1);
        CHECK_MESSAGE(gap < previous, "m=" << m << " r=" << r);
        previous = gap;
      }
    }
  }

  TEST_CASE("psi_value decays") {
    for (int m = 2; m <= 12; ++m) {
      for (double r = 0.0; r <= 25.0; r += 0.25) CHECK(psi_value(m, r + 1) < psi_value(m, r));
    }
  }

  TEST_CASE("Psi_time: closed form, evenness, mass and refinement") {
    for (int m : {2, 3, 7, 12}) {
      CAPTURE(m);
      for (double t : {0.0, 0.4, 1.0, 2.5, 6.0, 10.0}) {
        const double v = Psi_time(m, t).value;
        CHECK(v == doctest::Approx(oracle::Psi_closed_form(m, t)).epsilon(1e-9));
        CHECK(std::abs(Psi_time(m, -t).value - v) < 1e-10);
      }
      // Psi(0) is the mass of psi, by an independent trapezoid sum.
      double mass = 0;
      const double h = 1e-3;
      for (int i = 1; i < 60000; ++i) mass += static_cast<double>(oracle::psi_direct(m, i * h));
      mass = 2 * h * (mass + 0.5 * static_cast<double>(oracle::psi_direct(m, 0)));
      CHECK(Psi_time(m, 0.0).value == doctest::Approx(mass).epsilon(1e-9));

      QuadratureOptions fine;
      fine.tol = 1e-13;
      for (double t = 0.0; t <= 10.0; t += 0.5) {
        CHECK(std::abs(Psi_time(m, t, fine).value - Psi_time(m, t).value) < 1e-8);
      }
    }
  }

  TEST_CASE("Psi_on_grid matches the closed form") {
    std::vector<double> ts;
    for (double t = -5.0; t <= 5.0; t += 0.125) ts.push_back(t);
    for (int m : {2, 5, 11}) {
      double error = 0;
      const auto v = Psi_on_grid(m, ts, {}, &error);
      CHECK(error < 1e-8);
      for (std::size_t i = 0; i < ts.size(); ++i) {
        CHECK(std::abs(v[i] - oracle::Psi_closed_form(m, ts[i])) < 1e-8);
      }
    }
  }

  TEST_CASE("decompose_cone_sum examples") {
    CHECK(decompose_cone_sum(standard_grid({3}), 12, FitMode::Exact) == std::vector<int>{3});
    const auto s = standard_grid({2, 2, 7});
    CHECK(decompose_cone_sum(s, 12, FitMode::Exact) == std::vector<int>{2, 2, 7});
    const auto brute = oracle::brute_force_cone_counts(s.grid(), s.values, 10, 3);
    CHECK(brute == std::vector<int>{2, 0, 0, 0, 0, 1, 0, 0, 0});
    CHECK(decompose_cone_sum(standard_grid({}), 12, FitMode::Exact).empty());
  }

  TEST_CASE("decompose_cone_sum: additivity over all pairs") {
    for (int a = 2; a <= 12; ++a) {
      for (int b = a + 1; b <= 12; ++b) {
        CAPTURE(a);
        CAPTURE(b);
        CHECK(decompose_cone_sum(standard_grid({a, b}), 12, FitMode::Exact) == std::vector<int>{a, b});
      }
    }
  }

  TEST_CASE("decompose_cone_sum: stable under relative noise") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const auto& orders : std::vector<std::vector<int>>{{2, 3, 7}, {4, 4, 9, 12}, {5}, {2, 2, 2, 11}}) {
      auto s = standard_grid(orders);
      for (auto& v : s.values) v *= 1 + 1e-6 * u(rng);
      CHECK(decompose_cone_sum(s, 12, FitMode::Noisy) == orders);
    }
  }

  TEST_CASE("decompose_cone_sum errors") {
    auto half = standard_grid({2});
    for (auto& v : half.values) v *= 0.5;
    CHECK(code_of([&] { fit_cone_sum(half, 12, FitMode::Exact); }) == ErrorCode::NonIntegerFit);

    DecomposeOptions loose;
    loose.noisy_threshold = 10.0;
    CHECK(code_of([&] { fit_cone_sum(half, 12, FitMode::Noisy, loose); }) == ErrorCode::AmbiguousFit);

    auto short_grid = sample_psi_sum(std::vector<int>{3}, 0.0, 0.05, 100);
    CHECK(code_of([&] { fit_cone_sum(short_grid, 12, FitMode::Exact); }) == ErrorCode::InvalidInput);
    auto in_t = standard_grid({3});
    in_t.variable = "t";
    CHECK(code_of([&] { fit_cone_sum(in_t, 12, FitMode::Exact); }) == ErrorCode::InvalidInput);
  }

  TEST_CASE("SampledFunction: uniformity and CSV roundtrip") {
    const std::vector<double> xs{0.0, 0.1, 0.2, 0.3};
    const auto f = from_samples("r", xs, {1.0, 2.0, 3.0, 4.5});
    CHECK(f.step == doctest::Approx(0.1));
    const std::vector<double> bumpy{0.0, 0.1, 0.2001, 0.3};
    CHECK_THROWS_AS(from_samples("r", bumpy, {1.0, 2.0, 3.0, 4.0}), Error);
    SampledFunction bad = f;
    bad.values[1] = std::nan("");
    CHECK_THROWS_AS(bad.validate(), Error);

    const auto s = standard_grid({2, 5});
    std::stringstream io;
    write_csv(io, s);
    CHECK(io.str().rfind("r,value\n", 0) == 0);
    const auto back = read_csv(io);
    CHECK(back.variable == "r");
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(back.values[i] == doctest::Approx(s.values[i]).epsilon(1e-14));
    }
    CHECK(decompose_cone_sum(back, 12, FitMode::Exact) == std::vector<int>{2, 5});
  }
}
