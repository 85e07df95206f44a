#include "quartic/kloosterman.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace quartic {

namespace {

int64_t mod(int64_t a, int64_t q) {
  a %= q;
  return a < 0 ? a + q : a;
}

std::complex<double> e_q(int64_t x, int64_t q) {
  const double t = 2.0 * std::numbers::pi * static_cast<double>(mod(x, q)) / static_cast<double>(q);
  return {std::cos(t), std::sin(t)};
}

std::vector<int64_t> prime_divisors(int64_t q) {
  std::vector<int64_t> ps;
  for (int64_t p = 2; p * p <= q; ++p)
    if (q % p == 0) {
      ps.push_back(p);
      while (q % p == 0) q /= p;
    }
  if (q > 1) ps.push_back(q);
  return ps;
}

}  // namespace

int64_t floor_div(int64_t a, int64_t b) {
  int64_t d = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --d;
  return d;
}

int64_t mod_inverse(int64_t a, int64_t q) {
  int64_t r0 = mod(a, q), r1 = q, s0 = 1, s1 = 0;
  while (r1) {
    const int64_t k = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - k * r1};
    std::tie(s0, s1) = std::pair{s1, s0 - k * s1};
  }
  if (r0 != 1 && q != 1) throw std::invalid_argument("mod_inverse: not a unit");
  return mod(s0, q);
}

int64_t euler_phi(int64_t q) {
  int64_t r = q;
  for (int64_t p : prime_divisors(q)) r -= r / p;
  return r;
}

int64_t divisor_count(int64_t q) {
  int64_t t = 1;
  for (int64_t p = 2; p * p <= q; ++p) {
    int e = 0;
    while (q % p == 0) q /= p, ++e;
    t *= e + 1;
  }
  return q > 1 ? 2 * t : t;
}

int64_t count_in_class(const Interval& I, int64_t q, int64_t r) {
  if (I.size() == 0) return 0;
  return floor_div(I.hi - r, q) - floor_div(I.lo - 1 - r, q);
}

int64_t count_units(const Interval& I, int64_t q) {
  if (I.size() == 0) return 0;
  const auto ps = prime_divisors(q);
  int64_t total = 0;
  for (uint32_t mask = 0; mask < (1u << ps.size()); ++mask) {
    int64_t d = 1;
    int sign = 1;
    for (size_t i = 0; i < ps.size(); ++i)
      if (mask >> i & 1) d *= ps[i], sign = -sign;
    total += sign * (floor_div(I.hi, d) - floor_div(I.lo - 1, d));
  }
  return total;
}

std::complex<double> kloosterman_sum(int64_t r, int64_t s, int64_t q) {
  if (q < 1) throw std::invalid_argument("kloosterman_sum: q must be positive");
  if (q > kKloostermanCap) throw std::invalid_argument("kloosterman_sum: q above direct-summation cap");
  const int64_t rr = mod(r, q), ss = mod(s, q);
  std::complex<double> acc = 0;
  for (int64_t a = 1; a <= q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    const int64_t ai = mod_inverse(a, q);
    acc += e_q((rr * (a % q) + ss * ai) % q, q);
  }
  return acc;
}

std::vector<std::complex<double>> kloosterman_table(int64_t q) {
  if (q < 1 || q > kKloostermanCap) throw std::invalid_argument("kloosterman_table: q out of range");
  const auto n = static_cast<size_t>(q);
  std::vector<std::complex<double>> out(n * n);
  std::vector<int64_t> inv(n, -1);
  for (int64_t y = 0; y < q; ++y)
    if (std::gcd(y, q) == 1) inv[static_cast<size_t>(y)] = mod_inverse(y, q);
  if (q == 1) inv[0] = 0;
  auto* in = fftw_alloc_complex(n);
  auto* res = fftw_alloc_complex(n);
  fftw_plan plan;
#pragma omp critical(quartic_fftw_plan)
  plan = fftw_plan_dft_1d(static_cast<int>(q), in, res, FFTW_BACKWARD, FFTW_ESTIMATE);
  for (int64_t r = 0; r < q; ++r) {
    // in[y] = e_q(r y^(-1)) on units, so res[s] = ∑_y e_q(r y^(-1) + s y) = K(r, s, q).
    for (size_t y = 0; y < n; ++y) {
      if (inv[y] < 0) {
        in[y][0] = in[y][1] = 0.0;
      } else {
        const auto z = e_q(r * inv[y], q);
        in[y][0] = z.real();
        in[y][1] = z.imag();
      }
    }
    fftw_execute(plan);
    for (size_t s = 0; s < n; ++s) out[static_cast<size_t>(r) * n + s] = {res[s][0], res[s][1]};
  }
#pragma omp critical(quartic_fftw_plan)
  fftw_destroy_plan(plan);
  fftw_free(in);
  fftw_free(res);
  return out;
}

double weil_bound(int64_t r, int64_t s, int64_t q) {
  const int64_t g = std::gcd(std::gcd(r < 0 ? -r : r, s < 0 ? -s : s), q);
  return static_cast<double>(divisor_count(q)) * std::sqrt(static_cast<double>(g)) * std::sqrt(static_cast<double>(q));
}

int64_t rect_count(const Rect& rect, int64_t q, int64_t a) {
  if (q < 1) throw std::invalid_argument("rect_count: q must be positive");
  if (std::gcd(mod(a, q), q) != 1) throw std::invalid_argument("rect_count: a not coprime to q");
  if (rect.I.size() == 0 || rect.J.size() == 0) return 0;
  int64_t total = 0;
  for (int64_t x = 0; x < q; ++x) {
    if (std::gcd(x, q) != 1) continue;
    const int64_t cu = count_in_class(rect.I, q, x);
    if (cu) total += cu * count_in_class(rect.J, q, mod(a * mod_inverse(x, q), q));
  }
  return total;
}

std::vector<int64_t> rect_class_counts(const Rect& rect, int64_t q) {
  std::vector<int64_t> cu(static_cast<size_t>(q)), cv(static_cast<size_t>(q)), h(static_cast<size_t>(q), 0);
  for (int64_t x = 0; x < q; ++x) {
    cu[static_cast<size_t>(x)] = count_in_class(rect.I, q, x);
    cv[static_cast<size_t>(x)] = count_in_class(rect.J, q, x);
  }
  for (int64_t x = 0; x < q; ++x) {
    if (!cu[static_cast<size_t>(x)]) continue;
    for (int64_t y = 0; y < q; ++y) h[static_cast<size_t>(x * y % q)] += cu[static_cast<size_t>(x)] * cv[static_cast<size_t>(y)];
  }
  return h;
}

double rect_count_star(const Rect& rect, int64_t q) {
  return static_cast<double>(count_units(rect.I, q)) * static_cast<double>(count_units(rect.J, q)) /
         static_cast<double>(euler_phi(q));
}

double equidist_error(const Rect& rect, int64_t q) {
  if (q < 2) throw std::invalid_argument("equidist_error: q must be >= 2");
  const auto h = rect_class_counts(rect, q);
  const double star = rect_count_star(rect, q);
  double worst = 0.0;
  for (int64_t a = 1; a < q; ++a)
    if (std::gcd(a, q) == 1) worst = std::max(worst, std::fabs(static_cast<double>(h[static_cast<size_t>(a)]) - star));
  return worst;
}

double equidist_shape(int64_t q) {
  const double l = 1.0 + std::log(static_cast<double>(q));
  return static_cast<double>(divisor_count(q)) * std::sqrt(static_cast<double>(q)) * l * l;
}

}  // namespace quartic
