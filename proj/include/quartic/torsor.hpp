#pragma once
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "quartic/oracle.hpp"
#include "quartic/surfaces.hpp"

namespace quartic {

/// (t1..t9); index 0 holds t1.
using Tuple9 = std::array<int64_t, 9>;

struct Validation {
  bool valid;
  std::string violated;  // empty when valid
};

/// Checks nonzero, positivity, torsor equation, coprimality, heights in that order.
/// Labels: V1 gcd1..gcd7, condition1..condition4; V2 gcd1'..gcd7', condition1'..condition5'.
Validation validate_tuple(Surface s, const Tuple9& t, int64_t B);

/// Left side of the torsor equation.
i128 torsor_equation(Surface s, const Tuple9& t);

/// Raw monomial image (x0..x4), exact in 128 bits; throws OverflowError.
std::array<i128, 5> torsor_monomials(Surface s, const Tuple9& t);

/// normalize(monomials); rejects tuples off the torsor equation.
Point torsor_to_point(Surface s, const Tuple9& t);

struct TorsorCount {
  int64_t raw;    // #T(B)
  int64_t count;  // raw / 2
};

/// Fast exact count; OpenMP over the outermost variable.
TorsorCount torsor_count(Surface s, int64_t B);
CountRecord count_via_torsor(Surface s, int64_t B);

/// Slow loop over loose bounds with validate_tuple as the sole filter.
std::vector<Tuple9> enumerate_tuples_reference(Surface s, int64_t B);
TorsorCount torsor_count_reference(Surface s, int64_t B);

/// Dyadic box (K, 2K] per coordinate, coordinates ordered (m1, m4, m5, m6, m7, m8, m9).
/// m1, m6, m7 positive; the others range over both signs.
using DyadicBox = std::array<double, 7>;
int64_t dyadic_box_count(Surface s, const DyadicBox& K);
int64_t dyadic_box_count_naive(Surface s, const DyadicBox& K);
/// K1 K6 K7 min(K4 K5, K8 K9) for V1, K1 (K4 K5 K6 K7 K8 K9)^(1/2) for V2.
double dyadic_reference_bound(Surface s, const DyadicBox& K);

}  // namespace quartic
