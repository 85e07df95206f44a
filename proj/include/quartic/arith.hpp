#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "quartic/sieve.hpp"

namespace quartic {

using Rational = mpq_class;

struct Basics {
  Rational phi_star, phi_dag, phi_prime;
  int mu;
  int omega;
  int64_t tau;
};

/// φ*(n) = ∏(1 - 1/p), φ†(n) = ∏(1 - 1/p^2), φ'(n) = ∏((1 - 1/p)(1 + 1/p - 1/p^2))^(-1) over p | n.
Basics multiplicative_basics(uint64_t n, const FactorSieve& sv);
Rational phi_star(uint64_t n, const FactorSieve& sv);
Rational phi_dag(uint64_t n, const FactorSieve& sv);
Rational phi_prime(uint64_t n, const FactorSieve& sv);

Rational psi_abc(uint64_t n, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv);
double psi_abc_double(uint64_t n, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv);

/// ψ_{a,b,c} for all n ≤ X (index 0 unused), by a multiplicative sweep.
std::vector<double> psi_table(uint64_t X, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv);

/// (ψ∗μ)(n) from its closed form.
Rational psi_mu(uint64_t n, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv);
double psi_mu_double(uint64_t n, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv);
/// (ψ∗μ)(n) by summing over divisors; slow reference.
Rational psi_mu_convolution(uint64_t n, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv);

/// ∑_{k | n} 2^ω(k) k^(-σ).
double phi_sigma(uint64_t n, double sigma, const FactorSieve& sv);

struct Bounded {
  double value;
  double tail_bound;
};

/// ∏_{p ≤ L} (1 - 1/p)(1 + 1/p - 1/p^2); the true constant lies in [value - tail_bound, value].
Bounded constant_P(uint64_t prime_limit);
/// constant_P(10^6), computed once.
const Bounded& constant_P_cached();

Rational capital_Psi(uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv);

struct SumCheck {
  double sum;
  double main_term;
  double normalized_error;
};

/// Exact ∑_{n ≤ X} ψ(n); intended for X up to a few thousand.
Rational psi_partial_sum_exact(uint64_t X, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv);
SumCheck psi_partial_sum(uint64_t X, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv, double sigma = 0.5);

struct Weight {
  std::function<double(double)> g;
  int sign_changes = 0;  // R_g(I)
  std::optional<std::function<double(double, double)>> integral;  // ∫_s^t g, if known
};

SumCheck weighted_psi_sum(double t1, double t2, const Weight& w, uint64_t a, uint64_t b, uint64_t c,
                          const FactorSieve& sv, double sigma = 0.5);

struct DirichletCheck {
  double partial;     // ∑_{d ≤ D} (ψ∗μ)(d)/d
  double target;      // P Ψ(a,b,c)
  double tail_bound;  // series tail plus uncertainty in P
};

DirichletCheck dirichlet_constant_check(uint64_t D, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv);

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 40);

}  // namespace quartic
