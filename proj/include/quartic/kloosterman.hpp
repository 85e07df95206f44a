#pragma once
#include <complex>
#include <cstdint>
#include <vector>

namespace quartic {

constexpr int64_t kKloostermanCap = 100000;

/// Integer interval [lo, hi]; empty when lo > hi.
struct Interval {
  int64_t lo, hi;
  int64_t size() const { return hi < lo ? 0 : hi - lo + 1; }
};

struct Rect {
  Interval I, J;
};

int64_t mod_inverse(int64_t a, int64_t q);
int64_t euler_phi(int64_t q);
int64_t divisor_count(int64_t q);
int64_t floor_div(int64_t a, int64_t b);
/// #{u ∈ I : u ≡ r (mod q)}.
int64_t count_in_class(const Interval& I, int64_t q, int64_t r);
/// #{u ∈ I : gcd(u, q) = 1}.
int64_t count_units(const Interval& I, int64_t q);

/// Direct summation over units α mod q of e_q(rα + sα^(-1)); q ≤ kKloostermanCap.
std::complex<double> kloosterman_sum(int64_t r, int64_t s, int64_t q);
/// All K(r, s, q) for r, s ∈ [0, q), row-major in r, via one length-q FFT per r.
std::vector<std::complex<double>> kloosterman_table(int64_t q);

/// τ(q) gcd(r, s, q)^(1/2) q^(1/2), with gcd(0, 0, q) = q.
double weil_bound(int64_t r, int64_t s, int64_t q);

/// #{(u, v) ∈ I × J : uv ≡ a (mod q)}; a must be a unit.
int64_t rect_count(const Rect& rect, int64_t q, int64_t a);
/// Counts for every residue class a ∈ [0, q), units or not.
std::vector<int64_t> rect_class_counts(const Rect& rect, int64_t q);
double rect_count_star(const Rect& rect, int64_t q);
/// max over units a of |rect_count - rect_count_star|.
double equidist_error(const Rect& rect, int64_t q);
/// τ(q) q^(1/2) (1 + log q)^2.
double equidist_shape(int64_t q);

}  // namespace quartic
