#include "quartic/torsor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "quartic/sieve.hpp"

namespace quartic {

namespace {

inline int64_t iabs(int64_t x) { return x < 0 ? -x : x; }

int64_t isqrt(int64_t n) {
  if (n <= 0) return 0;
  auto r = static_cast<int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool coprime(int64_t a, int64_t b) { return std::gcd(a, b) == 1; }

/// gcd(x, y1*y2*...) == 1 without forming the product.
bool coprime_to_all(int64_t x, std::initializer_list<int64_t> ys) {
  for (auto y : ys)
    if (!coprime(x, y)) return false;
  return true;
}

/// Saturating |product|; returns a value > limit when the true product exceeds limit.
i128 abs_product(std::initializer_list<int64_t> xs) {
  const i128 cap = static_cast<i128>(1) << 100;
  i128 r = 1;
  for (auto x : xs) {
    r *= iabs(x);
    if (r > cap) return cap;
  }
  return r;
}

// ---- fast kernel ---------------------------------------------------------

using Primes = std::vector<uint64_t>;

void append_primes(const FactorSieve& sv, int64_t n, Primes& out) { sv.distinct_primes(static_cast<uint64_t>(n), out); }

void finish(Primes& p) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
}

/// sum over squarefree d built from ps[i..] of mu(d) floor(n/d); ps sorted ascending.
int64_t coprime_upto(int64_t n, const uint64_t* ps, size_t k, size_t i = 0) {
  int64_t r = n;
  for (size_t j = i; j < k; ++j) {
    if (static_cast<int64_t>(ps[j]) > n) break;
    r -= coprime_upto(n / static_cast<int64_t>(ps[j]), ps, k, j + 1);
  }
  return r;
}

bool has_prime_in(const FactorSieve& sv, int64_t a, const Primes& ps) {
  while (a > 1) {
    uint64_t p = sv.spf(static_cast<uint64_t>(a));
    if (std::binary_search(ps.begin(), ps.end(), p)) return true;
    while (a % static_cast<int64_t>(p) == 0) a /= static_cast<int64_t>(p);
  }
  return false;
}

/// #{(x, y) : x ≤ X, y ≤ Y, x y ≤ P, x ⊥ px, y ⊥ py, gcd(x, y) = 1}.
int64_t count_pairs(int64_t X, int64_t Y, int64_t P, const Primes& px, const Primes& py, const FactorSieve& sv,
                    Primes& scratch) {
  X = std::min(X, P);
  Y = std::min(Y, P);
  if (X <= 0 || Y <= 0) return 0;
  const Primes* pa = &px;
  const Primes* pb = &py;
  if (X > Y) {
    std::swap(X, Y);
    std::swap(pa, pb);
  }
  int64_t total = 0;
  for (int64_t x = 1; x <= X; ++x) {
    if (has_prime_in(sv, x, *pa)) continue;
    int64_t lim = std::min(Y, P / x);
    scratch.assign(pb->begin(), pb->end());
    if (x > 1) {
      append_primes(sv, x, scratch);
      finish(scratch);
    }
    total += coprime_upto(lim, scratch.data(), scratch.size());
  }
  return total;
}

int64_t kernel_v1(int64_t B) {
  const int64_t rootB = isqrt(B);
  const int64_t smax = 2 * rootB + 2;
  FactorSieve sv(static_cast<uint64_t>(smax));
  std::vector<std::vector<uint32_t>> divs(static_cast<size_t>(smax + 1));
  for (int64_t d = 1; d <= smax; ++d)
    for (int64_t n = d; n <= smax; n += d) divs[static_cast<size_t>(n)].push_back(static_cast<uint32_t>(d));

  int64_t raw = 0;
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : raw)
  for (int64_t e1 = 1; e1 <= rootB; ++e1) {
    Primes p2, p3, base2, base3, scratch;
    for (int64_t e6 = 1; e1 * e6 <= rootB; ++e6) {
      for (int64_t e7 = 1; e1 * e6 * e7 <= rootB; ++e7) {
        if (!coprime(e6, e7)) continue;
        const int64_t m = e1 * e6 * e7;
        const int64_t lim4 = std::min(rootB, B / e1 / e6 / e6);
        for (int64_t a4 = 1; a4 <= lim4; ++a4) {
          if (!coprime(a4, m)) continue;
          base2.clear();
          append_primes(sv, e1, base2);
          append_primes(sv, a4, base2);
          append_primes(sv, e6, base2);
          const int64_t c3base = B / e1 / a4 / e6 / e6;  // b^2 |e8| ≤ c3base
          const int64_t lim5 = std::min(rootB / a4, B / e1 / e7 / e7);
          for (int64_t a5 = 1; a5 <= lim5; ++a5) {
            if (!coprime(a5, m)) continue;
            const int64_t c4base = B / e1 / a5 / e7 / e7;  // a^2 |e9| ≤ c4base
            const int64_t mx = std::max(a4 * a5, m);
            const int64_t P = B / (mx * mx);
            if (P == 0) continue;
            base3.clear();
            append_primes(sv, e1, base3);
            append_primes(sv, a5, base3);
            append_primes(sv, e7, base3);
            for (int64_t prod : {a4 * a5, -a4 * a5}) {
              const int64_t s = -(prod + m);
              if (s == 0) continue;
              const int64_t as = iabs(s);
              for (uint32_t d : divs[static_cast<size_t>(as)]) {
                const int64_t a8 = d, a9 = as / d;
                if (a8 > c3base || a9 > c4base) continue;
                p2 = base2;
                append_primes(sv, a8, p2);
                finish(p2);
                p3 = base3;
                append_primes(sv, a9, p3);
                finish(p3);
                // x2 sign patterns of (e4, e5) with the same product, times sign of e8
                raw += 4 * count_pairs(isqrt(c4base / a9), isqrt(c3base / a8), P, p2, p3, sv, scratch);
              }
            }
          }
        }
      }
    }
  }
  return raw;
}

int64_t kernel_v2(int64_t B) {
  FactorSieve sv(static_cast<uint64_t>(B + 1));
  int64_t e1max = 1;
  while ((e1max + 1) * (e1max + 1) * (e1max + 1) <= 2 * B) ++e1max;

  int64_t raw = 0;
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : raw)
  for (int64_t e1 = 1; e1 <= e1max; ++e1) {
    Primes p2, p3, base2, base3, scratch;
    std::vector<uint64_t> ds;
    for (int64_t e6 = 1; e1 * e1 * e1 * e6 * e6 <= 2 * B && e1 * e1 * e6 <= B; ++e6) {
      for (int64_t e7 = 1; e1 * e1 * e1 * e6 * e6 * e7 * e7 <= 2 * B && e1 * e1 * e6 * e7 * e7 <= B; ++e7) {
        if (!coprime(e6, e7)) continue;
        const int64_t m = e1 * e6 * e7;
        const int64_t n = e1 * m;
        const int64_t cap34 = B / m;  // |e4 e5| and |e8 e9| times a b
        const int64_t lim5 = std::min(B / e1 / e1 / e6 / e7 / e7, isqrt(B / e7));
        for (int64_t a5 = 1; a5 <= lim5; ++a5) {
          if (!coprime(a5, m)) continue;
          base3.clear();
          append_primes(sv, e1, base3);
          append_primes(sv, a5, base3);
          append_primes(sv, e7, base3);
          const int64_t lim4 = std::min({B / e6, cap34 / a5, B / e7 / a5 / a5});
          const int64_t c2base = B / e1 / e1 / a5 / e6 / e7 / e7;  // a^2 |e9|
          for (int64_t a4 = 1; a4 <= lim4; ++a4) {
            if (!coprime(a4, m)) continue;
            const int64_t c5base = B / a4 / a5 / a5 / e7;  // a^2 |e9|
            const int64_t c1base = B / a4 / e6;            // b^2 |e8|
            const int64_t m9 = std::min(c2base, c5base);
            if (m9 == 0) continue;
            bool have_base2 = false;
            for (int64_t prod : {a4 * a5, -a4 * a5}) {
              const int64_t s = -(prod + n);
              if (s == 0) continue;
              const int64_t as = iabs(s);
              if (as > cap34) continue;
              if (static_cast<i128>(c1base) * m9 < as) continue;
              const int64_t P = cap34 / std::max(a4 * a5, as);
              if (P == 0) continue;
              if (!have_base2) {
                base2.clear();
                append_primes(sv, e1, base2);
                append_primes(sv, a4, base2);
                append_primes(sv, e6, base2);
                have_base2 = true;
              }
              ds = divisors(sv.factorize(static_cast<uint64_t>(as)));
              for (uint64_t d : ds) {
                const int64_t a8 = static_cast<int64_t>(d), a9 = as / a8;
                if (a8 > c1base || a9 > m9) continue;
                p2 = base2;
                append_primes(sv, a8, p2);
                finish(p2);
                p3 = base3;
                append_primes(sv, a9, p3);
                finish(p3);
                raw += 4 * count_pairs(isqrt(m9 / a9), isqrt(c1base / a8), P, p2, p3, sv, scratch);
              }
            }
          }
        }
      }
    }
  }
  return raw;
}

// ---- dyadic boxes --------------------------------------------------------

struct Range {
  int64_t lo, hi;  // absolute values in [lo, hi]
};

Range dyadic_range(double K) {
  if (!(K >= 0.5)) throw std::invalid_argument("dyadic range needs K >= 1/2");
  return {static_cast<int64_t>(std::floor(K)) + 1, static_cast<int64_t>(std::floor(2 * K))};
}

}  // namespace

i128 torsor_equation(Surface s, const Tuple9& t) {
  i128 lead = static_cast<i128>(t[0]) * t[5] * t[6];
  if (s == Surface::V2) lead *= t[0];
  return static_cast<i128>(t[3]) * t[4] + lead + static_cast<i128>(t[7]) * t[8];
}

std::array<i128, 5> torsor_monomials(Surface s, const Tuple9& t) {
  auto mono = [&](std::initializer_list<std::pair<int, int>> f) {
    i128 r = 1;
    for (auto [i, e] : f)
      for (int k = 0; k < e; ++k)
        if (__builtin_mul_overflow(r, static_cast<i128>(t[static_cast<size_t>(i - 1)]), &r))
          throw OverflowError("torsor monomial overflow");
    return r;
  };
  if (s == Surface::V1)
    return {mono({{2, 1}, {3, 1}, {4, 2}, {5, 2}}), mono({{1, 2}, {2, 1}, {3, 1}, {6, 2}, {7, 2}}),
            mono({{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}, {7, 1}}),
            mono({{1, 1}, {3, 2}, {4, 1}, {6, 2}, {8, 1}}), mono({{1, 1}, {2, 2}, {5, 1}, {7, 2}, {9, 1}})};
  return {mono({{3, 2}, {4, 1}, {6, 1}, {8, 1}}), mono({{1, 2}, {2, 2}, {5, 1}, {6, 1}, {7, 2}, {9, 1}}),
          mono({{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}, {7, 1}}),
          mono({{1, 1}, {2, 1}, {3, 1}, {6, 1}, {7, 1}, {8, 1}, {9, 1}}), mono({{2, 2}, {4, 1}, {5, 2}, {7, 1}, {9, 1}})};
}

Point torsor_to_point(Surface s, const Tuple9& t) {
  if (torsor_equation(s, t) != 0) throw std::invalid_argument("torsor_to_point: torsor equation violated");
  auto m = torsor_monomials(s, t);
  Point p;
  for (int i = 0; i < 5; ++i) {
    if (m[i] > INT64_MAX || m[i] < -INT64_MAX) throw OverflowError("torsor_to_point: coordinate exceeds 64 bits");
    p[i] = static_cast<int64_t>(m[i]);
  }
  return normalize(p);
}

Validation validate_tuple(Surface s, const Tuple9& t, int64_t B) {
  for (auto x : t)
    if (x == 0) return {false, "nonzero"};
  for (int i : {0, 1, 2, 5, 6})
    if (t[i] < 0) return {false, "positivity"};
  if (torsor_equation(s, t) != 0) return {false, "torsor"};
  const int64_t e1 = t[0], e2 = t[1], e3 = t[2], e4 = t[3], e5 = t[4], e6 = t[5], e7 = t[6], e8 = t[7], e9 = t[8];
  if (s == Surface::V1) {
    if (!coprime_to_all(e8, {e1, e2, e4, e5, e6, e7})) return {false, "gcd1"};
    if (!coprime_to_all(e4, {e1, e2, e6, e7, e9})) return {false, "gcd2"};
    if (!coprime_to_all(e5, {e1, e3, e6, e7, e9})) return {false, "gcd3"};
    if (!coprime_to_all(e6, {e2, e7, e9})) return {false, "gcd4"};
    if (!coprime_to_all(e3, {e1, e2, e7, e9})) return {false, "gcd5"};
    if (!coprime_to_all(e1, {e2, e9})) return {false, "gcd6"};
    if (!coprime(e9, e7)) return {false, "gcd7"};
    if (abs_product({e2, e3, e4, e4, e5, e5}) > B) return {false, "condition1"};
    if (abs_product({e1, e1, e2, e3, e6, e6, e7, e7}) > B) return {false, "condition2"};
    if (abs_product({e1, e3, e3, e4, e6, e6, e8}) > B) return {false, "condition3"};
    if (abs_product({e1, e2, e2, e5, e7, e7, e9}) > B) return {false, "condition4"};
    return {true, ""};
  }
  if (!coprime_to_all(e8, {e1, e2, e4, e5, e6, e7})) return {false, "gcd1'"};
  if (!coprime_to_all(e4, {e1, e2, e6, e7, e9})) return {false, "gcd2'"};
  if (!coprime_to_all(e5, {e1, e3, e6, e7, e9})) return {false, "gcd3'"};
  if (!coprime_to_all(e1, {e2, e3, e9})) return {false, "gcd4'"};
  if (!coprime_to_all(e3, {e2, e7, e9})) return {false, "gcd5'"};
  if (!coprime_to_all(e6, {e2, e7, e9})) return {false, "gcd6'"};
  if (!coprime(e7, e9)) return {false, "gcd7'"};
  if (abs_product({e3, e3, e4, e6, e8}) > B) return {false, "condition1'"};
  if (abs_product({e1, e1, e2, e2, e5, e6, e7, e7, e9}) > B) return {false, "condition2'"};
  if (abs_product({e1, e2, e3, e4, e5, e6, e7}) > B) return {false, "condition3'"};
  if (abs_product({e1, e2, e3, e6, e7, e8, e9}) > B) return {false, "condition4'"};
  if (abs_product({e2, e2, e4, e5, e5, e7, e9}) > B) return {false, "condition5'"};
  return {true, ""};
}

TorsorCount torsor_count(Surface s, int64_t B) {
  if (B < 1) throw std::invalid_argument("B must be positive");
  if (B > (int64_t{1} << 31)) throw std::invalid_argument("torsor_count: B above supported range 2^31");
  const int64_t raw = s == Surface::V1 ? kernel_v1(B) : kernel_v2(B);
  if (raw % 2) throw std::logic_error("torsor_count: odd raw tuple count " + std::to_string(raw));
  return {raw, raw / 2};
}

CountRecord count_via_torsor(Surface s, int64_t B) { return {s, B, CountMethod::torsor, torsor_count(s, B).count}; }

std::vector<Tuple9> enumerate_tuples_reference(Surface s, int64_t B) {
  if (B < 1) throw std::invalid_argument("B must be positive");
  // Every coordinate's absolute value is bounded through |x2| = |t1 ... t7| ≤ B and
  // |x3| ≤ B; the remaining filtering is validate_tuple alone.
  std::vector<Tuple9> out;
  Tuple9 t;
  for (int64_t e1 = 1; e1 <= B; ++e1)
    for (int64_t e6 = 1; e1 * e6 <= B; ++e6)
      for (int64_t e7 = 1; e1 * e6 * e7 <= B; ++e7)
        for (int64_t a4 = 1; e1 * e6 * e7 * a4 <= B; ++a4)
          for (int64_t a5 = 1; e1 * e6 * e7 * a4 * a5 <= B; ++a5)
            for (int64_t e4 : {a4, -a4})
              for (int64_t e5 : {a5, -a5}) {
                const int64_t lead = s == Surface::V1 ? e1 * e6 * e7 : e1 * e1 * e6 * e7;
                const int64_t rest = -(e4 * e5 + lead);
                for (int64_t e8 = -B; e8 <= B; ++e8) {
                  if (e8 == 0 || rest % e8) continue;
                  const int64_t e9 = rest / e8;
                  const int64_t core = e1 * e6 * e7 * a4 * a5;
                  for (int64_t e2 = 1; core * e2 <= B; ++e2)
                    for (int64_t e3 = 1; core * e2 * e3 <= B; ++e3) {
                      t = {e1, e2, e3, e4, e5, e6, e7, e8, e9};
                      if (validate_tuple(s, t, B).valid) out.push_back(t);
                    }
                }
              }
  return out;
}

TorsorCount torsor_count_reference(Surface s, int64_t B) {
  const auto raw = static_cast<int64_t>(enumerate_tuples_reference(s, B).size());
  if (raw % 2) throw std::logic_error("torsor_count_reference: odd raw tuple count");
  return {raw, raw / 2};
}

int64_t dyadic_box_count(Surface s, const DyadicBox& K) {
  Range r[7];
  for (int i = 0; i < 7; ++i) r[i] = dyadic_range(K[i]);
  for (auto& x : r)
    if (x.lo > x.hi) return 0;
  // Loop over the pair with fewer products and split the other via divisors.
  const bool split89 = K[1] * K[2] <= K[5] * K[6];
  const Range u = split89 ? r[1] : r[5], v = split89 ? r[2] : r[6];
  const Range p = split89 ? r[5] : r[1], q = split89 ? r[6] : r[2];
  FactorSieve sv(static_cast<uint64_t>(std::max<int64_t>(2, p.hi * q.hi)));
  int64_t total = 0;
  for (int64_t m1 = r[0].lo; m1 <= r[0].hi; ++m1)
    for (int64_t m6 = r[3].lo; m6 <= r[3].hi; ++m6)
      for (int64_t m7 = r[4].lo; m7 <= r[4].hi; ++m7) {
        const int64_t lead = (s == Surface::V1 ? m1 : m1 * m1) * m6 * m7;
        for (int64_t au = u.lo; au <= u.hi; ++au)
          for (int64_t av = v.lo; av <= v.hi; ++av)
            for (int64_t prod : {au * av, -au * av}) {
              // gcd(m4 m5, m1 m6 m7) = 1 regardless of which pair is split
              const int64_t rest = -(prod + lead);
              if (rest == 0) continue;
              const int64_t ar = iabs(rest);
              if (ar < p.lo * q.lo || ar > p.hi * q.hi) continue;
              for (uint64_t d : divisors(sv.factorize(static_cast<uint64_t>(ar)))) {
                const int64_t ap = static_cast<int64_t>(d), aq = ar / ap;
                if (ap < p.lo || ap > p.hi || aq < q.lo || aq > q.hi) continue;
                const int64_t m45 = split89 ? au * av : ap * aq;
                if (!coprime(m45, m1 * m6 * m7)) continue;
                total += 4;  // two sign patterns for the looped pair, two for the split pair
              }
            }
      }
  return total;
}

int64_t dyadic_box_count_naive(Surface s, const DyadicBox& K) {
  Range r[7];
  for (int i = 0; i < 7; ++i) r[i] = dyadic_range(K[i]);
  auto signed_vals = [](Range x) {
    std::vector<int64_t> v;
    for (int64_t a = x.lo; a <= x.hi; ++a) v.insert(v.end(), {a, -a});
    return v;
  };
  int64_t total = 0;
  for (int64_t m1 = r[0].lo; m1 <= r[0].hi; ++m1)
    for (int64_t m6 = r[3].lo; m6 <= r[3].hi; ++m6)
      for (int64_t m7 = r[4].lo; m7 <= r[4].hi; ++m7)
        for (int64_t m4 : signed_vals(r[1]))
          for (int64_t m5 : signed_vals(r[2]))
            for (int64_t m8 : signed_vals(r[5]))
              for (int64_t m9 : signed_vals(r[6])) {
                const int64_t lead = (s == Surface::V1 ? m1 : m1 * m1) * m6 * m7;
                if (m4 * m5 + lead + m8 * m9 == 0 && coprime(m4 * m5, m1 * m6 * m7)) ++total;
              }
  return total;
}

double dyadic_reference_bound(Surface s, const DyadicBox& K) {
  if (s == Surface::V1) return K[0] * K[3] * K[4] * std::min(K[1] * K[2], K[5] * K[6]);
  return K[0] * std::sqrt(K[1] * K[2] * K[3] * K[4] * K[5] * K[6]);
}

}  // namespace quartic
