#include "quartic/arith.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace quartic {

namespace {

void check_range(uint64_t n, const FactorSieve& sv) {
  if (n == 0 || n > sv.limit()) throw std::out_of_range("argument outside sieve range");
}

std::vector<uint64_t> primes_of(uint64_t n, const FactorSieve& sv) {
  std::vector<uint64_t> ps;
  for (auto [p, e] : sv.factorize(n)) ps.push_back(p);
  return ps;
}

bool divides(uint64_t p, uint64_t n) { return n % p == 0; }

Rational inv_phi_prime_local(uint64_t p) {
  Rational q(1, p);
  return (1 - q) * (1 + q - q * q);
}

double psi_local(uint64_t p, uint64_t a, uint64_t b, uint64_t c) {
  if (divides(p, c)) return 0.0;
  const double f = 1.0 - 1.0 / static_cast<double>(p);
  const int k = int(divides(p, a)) + int(divides(p, b));
  return k == 2 ? 1.0 : k == 1 ? f : f * f;
}

}  // namespace

Basics multiplicative_basics(uint64_t n, const FactorSieve& sv) {
  check_range(n, sv);
  Basics r{1, 1, 1, 1, 0, 1};
  for (auto [p, e] : sv.factorize(n)) {
    Rational q(1, p);
    r.phi_star *= 1 - q;
    r.phi_dag *= 1 - q * q;
    r.phi_prime /= inv_phi_prime_local(p);
    r.mu = e > 1 ? 0 : -r.mu;
    r.omega += 1;
    r.tau *= e + 1;
  }
  return r;
}

Rational phi_star(uint64_t n, const FactorSieve& sv) {
  Rational r = 1;
  for (auto p : primes_of(n, sv)) r *= 1 - Rational(1, p);
  return r;
}

Rational phi_dag(uint64_t n, const FactorSieve& sv) {
  Rational r = 1;
  for (auto p : primes_of(n, sv)) r *= 1 - Rational(1, p * p);
  return r;
}

Rational phi_prime(uint64_t n, const FactorSieve& sv) {
  Rational r = 1;
  for (auto p : primes_of(n, sv)) r /= inv_phi_prime_local(p);
  return r;
}

Rational psi_abc(uint64_t n, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv) {
  check_range(n, sv);
  if (std::gcd(n, c) > 1) return 0;
  Rational f = phi_star(n, sv);
  return f * f / (phi_star(std::gcd(n, a), sv) * phi_star(std::gcd(n, b), sv));
}

double psi_abc_double(uint64_t n, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv) {
  check_range(n, sv);
  double r = 1.0;
  for (auto p : primes_of(n, sv)) r *= psi_local(p, a, b, c);
  return r;
}

std::vector<double> psi_table(uint64_t X, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv) {
  if (X > sv.limit()) throw std::out_of_range("psi_table: X beyond sieve");
  std::vector<double> t(X + 1, 0.0);
  if (X >= 1) t[1] = 1.0;
  for (uint64_t n = 2; n <= X; ++n) {
    const uint64_t p = sv.spf(n), m = n / p;
    t[n] = (m % p == 0) ? t[m] : t[m] * psi_local(p, a, b, c);
  }
  return t;
}

Rational psi_mu(uint64_t n, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv) {
  check_range(n, sv);
  const auto f = sv.factorize(n);
  for (auto [p, e] : f)
    if (e > 1) return 0;
  const uint64_t g = std::gcd(std::gcd(a, b), n);
  if (c % g) return 0;
  Rational r(static_cast<long>(std::gcd(c, n)), n);
  r.canonicalize();
  if (f.size() % 2) r = -r;
  for (auto [p, e] : f) {
    if (divides(p, a) || divides(p, b) || divides(p, c)) continue;
    r *= 2 * (1 - Rational(1, 2 * p));
  }
  return r;
}

double psi_mu_double(uint64_t n, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv) {
  check_range(n, sv);
  const auto f = sv.factorize(n);
  for (auto [p, e] : f)
    if (e > 1) return 0.0;
  const uint64_t g = std::gcd(std::gcd(a, b), n);
  if (c % g) return 0.0;
  double r = static_cast<double>(std::gcd(c, n)) / static_cast<double>(n);
  if (f.size() % 2) r = -r;
  for (auto [p, e] : f) {
    if (divides(p, a) || divides(p, b) || divides(p, c)) continue;
    r *= 2.0 - 1.0 / static_cast<double>(p);
  }
  return r;
}

Rational psi_mu_convolution(uint64_t n, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv) {
  Rational r = 0;
  for (uint64_t d : divisors(sv.factorize(n))) {
    const int mu = multiplicative_basics(d, sv).mu;
    if (mu) r += mu * psi_abc(n / d, a, b, c, sv);
  }
  return r;
}

double phi_sigma(uint64_t n, double sigma, const FactorSieve& sv) {
  check_range(n, sv);
  double s = 0.0;
  for (uint64_t k : divisors(sv.factorize(n))) {
    const int w = k == 1 ? 0 : static_cast<int>(sv.factorize(k).size());
    s += std::ldexp(1.0, w) * std::pow(static_cast<double>(k), -sigma);
  }
  return s;
}

Bounded constant_P(uint64_t prime_limit) {
  if (prime_limit < 2) throw std::invalid_argument("constant_P: prime_limit must be >= 2");
  FactorSieve sv(prime_limit);
  long double v = 1.0L;
  for (uint64_t p : sv.primes()) {
    if (p > prime_limit) break;
    const long double q = 1.0L / static_cast<long double>(p);
    v *= (1 - q) * (1 + q - q * q);
  }
  // log(1 - 2/p^2 + 1/p^3) ≥ -3/p^2 and ∑_{p > L} 1/p^2 < 1/(L - 1).
  const double L = static_cast<double>(prime_limit);
  const double tail = static_cast<double>(v) * -std::expm1(-3.0 / (L - 1.0));
  return {static_cast<double>(v), tail};
}

const Bounded& constant_P_cached() {
  static const Bounded P = constant_P(1000000);
  return P;
}

Rational capital_Psi(uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv) {
  const uint64_t abc = a * b * c;
  return phi_star(c, sv) * phi_dag(abc, sv) / phi_dag(std::gcd(a, b) * c, sv) * phi_prime(abc, sv);
}

Rational psi_partial_sum_exact(uint64_t X, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv) {
  Rational s = 0;
  for (uint64_t n = 1; n <= X; ++n) s += psi_abc(n, a, b, c, sv);
  return s;
}

SumCheck psi_partial_sum(uint64_t X, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv, double sigma) {
  const auto t = psi_table(X, a, b, c, sv);
  long double s = 0.0L;
  for (uint64_t n = 1; n <= X; ++n) s += t[n];
  const double main = constant_P_cached().value * capital_Psi(a, b, c, sv).get_d() * static_cast<double>(X);
  const double err = std::fabs(static_cast<double>(s) - main) /
                     (phi_sigma(c, sigma, sv) * std::pow(static_cast<double>(X), sigma));
  return {static_cast<double>(s), main, err};
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth) {
  struct Rec {
    const std::function<double(double)>& f;
    double go(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) const {
      const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6 * (fa + 4 * flm + fm), right = (b - m) / 6 * (fm + 4 * frm + fb);
      const double diff = left + right - whole;
      if (depth <= 0 || std::fabs(diff) <= 15 * tol) return left + right + diff / 15;
      return go(a, m, fa, flm, fm, left, tol / 2, depth - 1) + go(m, b, fm, frm, fb, right, tol / 2, depth - 1);
    }
  } rec{f};
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec.go(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, depth);
}

SumCheck weighted_psi_sum(double t1, double t2, const Weight& w, uint64_t a, uint64_t b, uint64_t c,
                          const FactorSieve& sv, double sigma) {
  if (!(t1 >= 0 && t1 < t2)) throw std::invalid_argument("weighted_psi_sum: need 0 <= t1 < t2");
  const auto hi = static_cast<uint64_t>(std::floor(t2));
  const auto lo = std::max<uint64_t>(1, static_cast<uint64_t>(std::ceil(t1)));
  const auto t = psi_table(hi, a, b, c, sv);
  long double s = 0.0L;
  for (uint64_t n = lo; n <= hi; ++n) s += t[n] * w.g(static_cast<double>(n));
  const double integral =
      w.integral ? (*w.integral)(t1, t2) : adaptive_simpson(w.g, t1, t2, 1e-12 * std::max(1.0, t2 - t1));
  const double main = constant_P_cached().value * capital_Psi(a, b, c, sv).get_d() * integral;
  double sup = 0.0;
  const int samples = 4096;
  for (int i = 0; i <= samples; ++i) {
    const double x = t1 + (t2 - t1) * i / samples;
    if (x > 0) sup = std::max(sup, std::fabs(w.g(x)));
  }
  const double M = (1 + w.sign_changes) * sup;
  const double err = std::fabs(static_cast<double>(s) - main) / (phi_sigma(c, sigma, sv) * std::pow(t2, sigma) * M);
  return {static_cast<double>(s), main, err};
}

DirichletCheck dirichlet_constant_check(uint64_t D, uint64_t a, uint64_t b, uint64_t c, const FactorSieve& sv) {
  long double s = 0.0L;
  for (uint64_t d = 1; d <= D; ++d) s += psi_mu_double(d, a, b, c, sv) / static_cast<double>(d);
  const auto& P = constant_P_cached();
  const double Psi = capital_Psi(a, b, c, sv).get_d();
  // |(ψ∗μ)(d)/d| ≤ c 2^ω(d)/d^2 and ∑_{d > D} τ(d)/d^2 ≤ 2(log D + 2)/D.
  const double series_tail = static_cast<double>(c) * 2.0 * (std::log(static_cast<double>(D)) + 2.0) / D;
  return {static_cast<double>(s), P.value * Psi, series_tail + P.tail_bound * Psi};
}

}  // namespace quartic
