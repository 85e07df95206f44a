#include "quartic/peyre.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

namespace quartic {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::V1: return "V1";
    case Variant::V2a: return "V2a";
    default: return "V2b";
  }
}

namespace {

Halfspace hs(std::initializer_list<int> c, int b, Sense s) {
  QVec q;
  for (int x : c) q.emplace_back(x);
  return {q, b, s};
}

}  // namespace

RationalPolytope alpha_polytope(Variant v) {
  switch (v) {
    case Variant::V1:  // (t1, t2, t3, t7, t9)
      return {5,
              {hs({2, 3, -1, 4, 2}, 1, Sense::ge), hs({1, 2, 0, 2, 1}, 1, Sense::le),
               hs({2, 1, 1, 2, 0}, 1, Sense::le), hs({0, 1, 1, 0, 4}, 1, Sense::le)}};
    case Variant::V2a:  // (t2, t3, t6, t7, t9)
      return {5,
              {hs({-2, 4, 2, -1, -3}, 1, Sense::le), hs({4, -2, -1, 2, 3}, 1, Sense::le),
               hs({1, 1, 2, 2, 0}, 1, Sense::le), hs({2, 2, 1, 1, 6}, 2, Sense::le)}};
    default:  // (t2, t3, t6, t7, t8)
      return {5,
              {hs({0, 2, 1, 0, 1}, 1, Sense::le), hs({-2, 4, 2, -1, 3}, 1, Sense::ge),
               hs({1, 1, 2, 2, 0}, 1, Sense::le), hs({2, 2, 1, 1, 6}, 2, Sense::le)}};
  }
}

AlphaConstants alpha_constants(Surface s) {
  if (s == Surface::V1) return {polytope_volume(alpha_polytope(Variant::V1)), std::nullopt, std::nullopt};
  const Rational a = polytope_volume(alpha_polytope(Variant::V2a));
  const Rational b = polytope_volume(alpha_polytope(Variant::V2b));
  Rational alpha = (a + b) / 3;
  alpha.canonicalize();
  if (alpha != Rational(1, 2160)) throw std::logic_error("alpha_constants: (alpha_a + alpha_b)/3 != 1/2160");
  return {alpha, a, b};
}

double density_h(Variant v, const std::array<double, 3>& t) {
  const double t4 = t[0], t5 = t[1], w = t[2];
  if (v == Variant::V1) {
    const double t6 = w;
    return std::max({t4 * t4 * t5 * t5, t6 * t6, std::fabs(t4) * t6 * t6 * std::fabs(t4 * t5 + t6), std::fabs(t5)});
  }
  const double t1 = w, s = t4 * t5 + t1 * t1;
  if (v == Variant::V2a)
    return std::max({std::fabs(t4) * std::fabs(s), t1 * t1 * std::fabs(t5), t1 * std::fabs(t4 * t5),
                     t1 * std::fabs(s), std::fabs(t4) * t5 * t5});
  return std::max({std::fabs(t4), t1 * t1 * std::fabs(t5) * std::fabs(s), t1 * std::fabs(t4 * t5), t1 * std::fabs(s),
                   std::fabs(t4) * t5 * t5 * std::fabs(s)});
}

namespace {

/// |a t^2 + b t + c| ≤ r, evaluated in long double since roots reach 1e15 and beyond
struct QuadCond {
  long double a, b, c, r;
  bool holds(long double t) const { return fabsl((a * t + b) * t + c) <= r; }
};

void quad_roots(long double a, long double b, long double c, std::vector<long double>& out) {
  if (a == 0) {
    if (b != 0) out.push_back(-c / b);
    return;
  }
  const long double disc = b * b - 4 * a * c;
  if (disc < 0) return;
  const long double q = -0.5L * (b + copysignl(sqrtl(disc), b));
  if (q != 0) {
    out.push_back(q / a);
    out.push_back(c / q);
  } else {
    out.push_back(0.0L);
  }
}

double measure(const std::vector<QuadCond>& conds) {
  std::vector<long double> br;
  for (const auto& k : conds) {
    quad_roots(k.a, k.b, k.c - k.r, br);
    quad_roots(k.a, k.b, k.c + k.r, br);
  }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  auto in = [&](long double t) {
    for (const auto& k : conds)
      if (!k.holds(t)) return false;
    return true;
  };
  if (br.empty()) return in(0.0L) ? std::numeric_limits<double>::infinity() : 0.0;
  const long double lo = br.front(), hi = br.back();
  if (in(lo - 1 - fabsl(lo)) || in(hi + 1 + fabsl(hi))) return std::numeric_limits<double>::infinity();
  long double m = 0;
  for (size_t i = 0; i + 1 < br.size(); ++i)
    if (in(0.5L * (br[i] + br[i + 1]))) m += br[i + 1] - br[i];
  return static_cast<double>(m);
}

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
using G15 = boost::math::quadrature::gauss<double, 15>;

/// One 15/31-point Gauss-Kronrod pass on [a, b]; error is |K - G|.
/// The outer level spreads its nodes over threads.
template <bool Par, class F>
double gk_pass(F& f, double a, double b, double* err) {
  const auto& x = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G15::weights();
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  const int n = static_cast<int>(x.size());
  std::array<double, 16> fp{}, fm{};
#pragma omp parallel for schedule(dynamic, 1) if (Par)
  for (int i = 0; i < 2 * n - 1; ++i) {
    if (i < n)
      fp[static_cast<size_t>(i)] = f(c + h * x[static_cast<size_t>(i)]);
    else
      fm[static_cast<size_t>(i - n + 1)] = f(c - h * x[static_cast<size_t>(i - n + 1)]);
  }
  double K = fp[0] * wk[0], G = fp[0] * wg[0];
  for (size_t i = 1; i < x.size(); ++i) {
    const double s = fp[i] + fm[i];
    K += s * wk[i];
    if (i % 2 == 0) G += s * wg[i / 2];
  }
  *err = std::fabs(h * (K - G));
  return h * K;
}

/// Globally adaptive Gauss-Kronrod. Starts from a dyadic partition of [lo, hi]
/// towards lo (the integrands are multi-scale there) and bisects the worst
/// piece until the summed error drops below tol times the running total.
template <bool Par = false, class F>
double adaptive(F f, double lo, double hi, double tol, double* err, int max_pieces = 4000) {
  struct Piece {
    double a, b, v, e;
    bool operator<(const Piece& o) const { return e < o.e; }
  };
  std::priority_queue<Piece> q;
  double total = 0, etotal = 0;
  auto push = [&](double a, double b) {
    double e = 0;
    const double v = gk_pass<Par>(f, a, b, &e);
    q.push({a, b, v, e});
    total += v;
    etotal += e;
  };
  double b = hi;
  for (int k = 0; k < 12 && b > lo && b > 0; ++k) {
    const double a = std::max(lo, b * 0.5);
    push(a, b);
    b = a;
  }
  if (b > lo) push(lo, b);
  int pieces = static_cast<int>(q.size());
  while (etotal > tol * std::fabs(total) && pieces < max_pieces) {
    const Piece p = q.top();
    q.pop();
    total -= p.v;
    etotal -= p.e;
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {
      q.push({p.a, p.b, p.v, 0.0});
      total += p.v;
      continue;
    }
    push(p.a, m);
    push(m, p.b);
    ++pieces;
  }
  if (err) *err = std::max(etotal, 0.0);
  return total;
}

/// ∫ over t5 of the inner measure at fixed outer coordinate w.
double t5_integral(Variant v, double w, double tol, double* err) {
  auto both = [&](double u) { return density_inner_measure(v, u, w) + density_inner_measure(v, -u, w); };
  if (v == Variant::V1) return adaptive(both, 0.0, 1.0, tol, err);
  // h^a forces |t5| ≤ 1/t1^2; beyond |t5| = 1 substitute t5 = ±1/s.
  const double reach = v == Variant::V2a ? 1.0 / (w * w) : std::numeric_limits<double>::infinity();
  double e1 = 0, e2 = 0;
  double r = adaptive(both, 0.0, std::min(1.0, reach), tol, &e1);
  if (reach > 1.0) {
    const double smin = std::isinf(reach) ? 0.0 : 1.0 / reach;
    auto tail = [&](double s) { return s <= 0 ? 0.0 : both(1.0 / s) / (s * s); };
    r += adaptive(tail, smin, 1.0, tol, &e2);
  }
  if (err) *err = e1 + e2;
  return r;
}

Estimate density_once(Variant v, double tol) {
  const double hi = v == Variant::V1 ? 1.0 : std::cbrt(2.0);
  const double scale = v == Variant::V1 ? 2.0 : 3.0;
  auto f = [&](double w) { return t5_integral(v, w, tol * 0.1, nullptr); };
  double err = 0;
  const double I = adaptive<true>(f, 0.0, hi, tol, &err);
  return {scale * I, scale * err};
}

}  // namespace

double density_inner_measure(Variant v, double u, double w) {
  if (!(w > 0)) return 0.0;
  std::vector<QuadCond> c;
  if (v == Variant::V1) {
    if (w > 1 || std::fabs(u) > 1) return 0.0;
    c = {{0, u, 0, 1}, {u, w, 0, 1 / (w * w)}};
  } else if (v == Variant::V2a) {
    if (w * w * std::fabs(u) > 1) return 0.0;
    c = {{u, w * w, 0, 1}, {0, w * u, 0, 1}, {0, u, w * w, 1 / w}, {0, u * u, 0, 1}};
  } else {
    const double au = std::fabs(u);
    c = {{0, 1, 0, 1},
         {0, w * w * au * u, w * w * w * w * au, 1},
         {0, w * u, 0, 1},
         {0, u, w * w, 1 / w},
         {u * u * u, u * u * w * w, 0, 1}};
  }
  return measure(c);
}

Estimate density_integral(Variant v, double tol) {
  if (!(tol >= 1e-4)) throw std::invalid_argument("density tolerance must be >= 1e-4");
  const Estimate coarse = density_once(v, tol);
  const Estimate fine = density_once(v, tol * 1e-2);
  if (!std::isfinite(fine.value)) throw std::runtime_error("density quadrature did not converge");
  return {fine.value, std::fabs(fine.value - coarse.value) + fine.error};
}

Density archimedean_density(Surface s, double tol) {
  if (s == Surface::V1) {
    const auto e = density_integral(Variant::V1, tol);
    return {e.value, e.error, std::nullopt, std::nullopt};
  }
  const auto a = density_integral(Variant::V2a, tol);
  const auto b = density_integral(Variant::V2b, tol);
  return {a.value, a.error, a, b};
}

Rational euler_factor(uint64_t p) {
  const Rational q(1, p);
  Rational f = 1 - q;
  Rational f6 = f * f * f;
  f6 *= f6;
  return f6 * (1 + 6 * q + q * q);
}

Bounded euler_product(uint64_t prime_limit) {
  if (prime_limit < 2) throw std::invalid_argument("euler_product: prime_limit must be >= 2");
  FactorSieve sv(prime_limit);
  long double v = 1.0L;
  for (uint64_t p : sv.primes()) {
    const long double q = 1.0L / static_cast<long double>(p);
    const long double f = 1 - q;
    v *= f * f * f * f * f * f * (1 + 6 * q + q * q);
  }
  // |log factor| ≤ 21/p^2 for p ≥ 5 and ∑_{p > L} 1/p^2 < 1/(L - 1).
  const double L = static_cast<double>(std::max<uint64_t>(prime_limit, 4));
  const double tail = static_cast<double>(v) * -std::expm1(-21.0 / (L - 1.0));
  return {static_cast<double>(v), tail};
}

namespace {

std::vector<uint64_t> primes_dividing(std::initializer_list<uint64_t> xs) {
  std::vector<uint64_t> ps;
  for (uint64_t n : xs) {
    for (uint64_t p = 2; p * p <= n; ++p)
      if (n % p == 0) {
        ps.push_back(p);
        while (n % p == 0) n /= p;
      }
    if (n > 1) ps.push_back(n);
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

Rational phi_star_of(std::initializer_list<uint64_t> xs) {
  Rational r = 1;
  for (auto p : primes_dividing(xs)) r *= 1 - Rational(1, p);
  return r;
}

Rational phi_dag_of(std::initializer_list<uint64_t> xs) {
  Rational r = 1;
  for (auto p : primes_dividing(xs)) r *= 1 - Rational(1, p * p);
  return r;
}

Rational phi_prime_of(std::initializer_list<uint64_t> xs) {
  Rational r = 1;
  for (auto p : primes_dividing(xs)) {
    const Rational q(1, p);
    r /= (1 - q) * (1 + q - q * q);
  }
  return r;
}

bool coprime_all(uint64_t x, std::initializer_list<uint64_t> ys) {
  for (auto y : ys)
    if (std::gcd(x, y) != 1) return false;
  return true;
}

}  // namespace

Rational theta_value(Variant v, const std::array<uint64_t, 5>& n) {
  for (auto x : n)
    if (x == 0) throw std::invalid_argument("theta_value: arguments must be positive");
  Rational r;
  if (v == Variant::V1) {
    const auto [e1, e2, e3, e7, e9] = n;
    if (!coprime_all(e3, {e1, e2, e7, e9}) || !coprime_all(e1, {e2, e9}) || std::gcd(e9, e7) != 1) return 0;
    r = phi_star_of({e1, e2, e7}) * phi_star_of({e1, e3, e7}) * phi_star_of({e2, e9}) /
        phi_star_of({std::gcd(e2, e7)});
    r *= phi_star_of({e2, e7, e9}) * phi_dag_of({e3}) * phi_prime_of({e1, e2, e3, e7, e9});
  } else if (v == Variant::V2a) {
    const auto [x2, x3, x6, x7, x9] = n;
    if (!coprime_all(x3, {x2, x7, x9}) || !coprime_all(x6, {x2, x7, x9}) || std::gcd(x7, x9) != 1) return 0;
    r = phi_star_of({x2, x6, x7}) * phi_star_of({x3, x6, x7}) * phi_star_of({x2, x9}) /
        phi_star_of({std::gcd(x2, x7)});
    r *= phi_star_of({x2, x3, x9}) * phi_prime_of({x2, x3, x6, x7, x9});
  } else {
    const auto [x2, x3, x6, x7, x8] = n;
    if (!coprime_all(x2, {x3, x6, x8}) || !coprime_all(x7, {x3, x6, x8}) || std::gcd(x8, x6) != 1) return 0;
    r = phi_star_of({x2, x6, x7}) * phi_star_of({x3, x6, x7}) * phi_star_of({x3, x8}) /
        phi_star_of({std::gcd(x3, x6)});
    r *= phi_star_of({x2, x3, x8}) * phi_prime_of({x2, x3, x6, x7, x8});
  }
  r.canonicalize();
  return r;
}

Rational theta_local_factor(Variant v, uint64_t p) {
  if (p < 2) throw std::invalid_argument("theta_local_factor: p must be prime");
  for (uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) throw std::invalid_argument("theta_local_factor: p must be prime");
  const Rational w(1, p - 1);  // ∑_{k ≥ 1} p^(-k)
  Rational total = 0;
  for (unsigned mask = 0; mask < 32; ++mask) {
    std::array<uint64_t, 5> n;
    Rational weight = 1;
    for (int i = 0; i < 5; ++i) {
      const bool on = mask >> i & 1;
      n[static_cast<size_t>(i)] = on ? p : 1;
      if (on) weight *= w;
    }
    total += theta_value(v, n) * weight;
  }
  total.canonicalize();
  return total;
}

Rational theta_expected(uint64_t p) {
  const Rational q(1, p);
  Rational r = (1 - q) * (1 + 6 * q + q * q) / ((1 - q) * (1 + q - q * q));
  r.canonicalize();
  return r;
}

PeyreBreakdown peyre_constant(Surface s, double tol, uint64_t prime_limit) {
  const auto alpha = alpha_constants(s).alpha;
  const auto dens = archimedean_density(s, tol);
  const auto eu = euler_product(prime_limit);
  const double a = alpha.get_d();
  const double c = a * dens.value * eu.value;
  // The Euler product is an upper bound; its tail widens the interval downward.
  const double err = a * (dens.error * eu.value + dens.value * eu.tail_bound);
  PeyreBreakdown b{s, alpha, 1, {dens.value, dens.error}, std::nullopt, eu, prime_limit, {c, err}};
  if (dens.via_b) b.omega_infinity_b = *dens.via_b;
  return b;
}

const PeyreBreakdown& peyre_constant_cached(Surface s) {
  static std::mutex mu;
  static std::map<Surface, PeyreBreakdown> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(s);
  if (it == cache.end()) it = cache.emplace(s, peyre_constant(s, 1e-4)).first;
  return it->second;
}

std::string to_json(const PeyreBreakdown& b) {
  nlohmann::ordered_json j;
  j["surface"] = to_string(b.surface);
  j["alpha"] = b.alpha.get_str();
  j["alpha_value"] = b.alpha.get_d();
  j["beta"] = b.beta;
  j["omega_infinity"] = b.omega_infinity.value;
  j["omega_infinity_error"] = b.omega_infinity.error;
  if (b.omega_infinity_b) {
    j["omega_infinity_alt"] = b.omega_infinity_b->value;
    j["omega_infinity_alt_error"] = b.omega_infinity_b->error;
  }
  j["euler_product"] = b.euler.value;
  j["euler_tail_bound"] = b.euler.tail_bound;
  j["prime_limit"] = b.prime_limit;
  j["c"] = b.c.value;
  j["c_error"] = b.c.error;
  return j.dump(2);
}

}  // namespace quartic
