#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "quartic/arith.hpp"
#include "quartic/polytope.hpp"
#include "quartic/surfaces.hpp"

namespace quartic {

/// V1, and the two halves of the V2 computation.
enum class Variant { V1, V2a, V2b };

std::string to_string(Variant v);

RationalPolytope alpha_polytope(Variant v);

struct AlphaConstants {
  Rational alpha;
  std::optional<Rational> alpha_a, alpha_b;
};

/// V2: α = (α_a + α_b)/3, asserted equal to 1/2160.
AlphaConstants alpha_constants(Surface s);

/// V1: h(t4, t5, t6); V2a: h^a(t4, t5, t1); V2b: h^b(t4, t5, t1).
double density_h(Variant v, const std::array<double, 3>& t);

/// Lebesgue measure of {t4 : h(t4, u, w) ≤ 1}, (u, w) = (t5, t6) for V1 and (t5, t1) for V2.
double density_inner_measure(Variant v, double u, double w);

struct Estimate {
  double value;
  double error;
};

/// 2 vol{t6 > 0, h ≤ 1} for V1, 3 vol{t1 > 0, h^a ≤ 1} or 3 vol{t1 > 0, h^b ≤ 1} for V2.
Estimate density_integral(Variant v, double tol);

struct Density {
  double value;
  double error;
  std::optional<Estimate> via_a, via_b;
};

/// For V2 the reported value is the h^a integral; both are returned.
Density archimedean_density(Surface s, double tol);

/// (1 - 1/p)^6 (1 + 6/p + 1/p^2).
Rational euler_factor(uint64_t p);
/// ∏_{p ≤ L} euler_factor(p); the true product lies in [value - tail_bound, value].
Bounded euler_product(uint64_t prime_limit);

/// Θ at a 5-tuple of positive integers, in the variable order
/// V1 (η1, η2, η3, η7, η9), V2a (ξ2, ξ3, ξ6, ξ7, ξ9), V2b (ξ2, ξ3, ξ6, ξ7, ξ8).
Rational theta_value(Variant v, const std::array<uint64_t, 5>& n);
/// ∑_{k ∈ Z^5_{≥0}} Θ(p^k) p^(-|k|), collapsed over the 32 support patterns.
Rational theta_local_factor(Variant v, uint64_t p);
/// φ'(p)(1 - 1/p)(1 + 6/p + 1/p^2).
Rational theta_expected(uint64_t p);

struct PeyreBreakdown {
  Surface surface;
  Rational alpha;
  int beta;
  Estimate omega_infinity;
  std::optional<Estimate> omega_infinity_b;
  Bounded euler;
  uint64_t prime_limit;
  Estimate c;
};

PeyreBreakdown peyre_constant(Surface s, double tol, uint64_t prime_limit = 1000000);
/// Memoized peyre_constant(s, 1e-4).
const PeyreBreakdown& peyre_constant_cached(Surface s);
std::string to_json(const PeyreBreakdown& b);

}  // namespace quartic
