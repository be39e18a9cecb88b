#pragma once

#include <array>
#include <span>
#include <vector>

#include "orbis/moebius.hpp"

namespace oracle {

// Minimal |trace| > 2 over all words of length <= max_len in the symbols
// (generators and their inverses), by plain depth-first search. Words are
// reduced only by forbidding a symbol next to its own inverse.
double brute_force_min_hyperbolic_trace(std::span<const orbis::Moebius> gens, int max_len);

// Closed form of the Fourier transform \int psi_m(r) e^{irt} dr:
// sum_{l=1}^{m-1} cosh(t/2) / (4m (sin^2(pi l/m) + sinh^2(t/2))).
double Psi_closed_form(int m, double t);

// Direct evaluation of psi_m from its defining sum, with long double.
double psi_direct(int m, double r);

// Count vector in {0..max_count}^(max_order-1) minimizing ||samples - sum c_m psi_m(r_i)||
// by exhaustive search. Returns counts indexed by m - 2.
std::vector<int> brute_force_cone_counts(std::span<const double> rs, std::span<const double> samples,
                                         int max_order, int max_count);

}  // namespace oracle
