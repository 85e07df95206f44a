#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "quartic/kloosterman.hpp"

using namespace quartic;

namespace {

// equidist_error / equidist_shape ceiling; calibration max 0.0328 over q = 2..300, 20 rectangles each
constexpr double kEquidistC = 0.05;

bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int64_t brute_rect(const Rect& r, int64_t q, int64_t a) {
  int64_t n = 0;
  for (int64_t u = r.I.lo; u <= r.I.hi; ++u)
    for (int64_t v = r.J.lo; v <= r.J.hi; ++v)
      if (((u * v - a) % q + q) % q == 0) ++n;
  return n;
}

}  // namespace

TEST_CASE("helpers") {
  CHECK(mod_inverse(3, 7) == 5);
  CHECK(mod_inverse(-3, 7) == 2);
  CHECK_THROWS(mod_inverse(2, 4));
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(12) == 4);
  CHECK(divisor_count(8) == 4);
  CHECK(floor_div(-7, 2) == -4);
  CHECK(count_in_class({-10, 10}, 3, 1) == 7);
  CHECK(count_units({1, 12}, 12) == 4);
}

TEST_CASE("kloosterman_sum examples") {
  for (int64_t q : {1, 2, 7, 12, 100}) CHECK(kloosterman_sum(0, 0, q).real() == doctest::Approx(euler_phi(q)));
  const auto k = kloosterman_sum(1, 0, 4);
  CHECK(std::abs(k) < 1e-12);
  for (int64_t p = 2; p <= 997; ++p) {
    if (!is_prime(p)) continue;
    const auto v = kloosterman_sum(1, 1, p);
    CHECK(std::abs(v.imag()) < 1e-9);
    CHECK(std::abs(v) <= 2 * std::sqrt(static_cast<double>(p)) + 1e-9);
  }
  CHECK_THROWS(kloosterman_sum(1, 1, kKloostermanCap + 1));
}

TEST_CASE("weil_bound examples") {
  CHECK(weil_bound(1, 1, 13) == doctest::Approx(2 * std::sqrt(13.0)));
  CHECK(weil_bound(0, 0, 12) == doctest::Approx(6 * 12.0));
  CHECK(weil_bound(2, 4, 8) == doctest::Approx(16.0));
}

TEST_CASE("FFT table equals direct sums") {
  for (int64_t q : {1, 2, 9, 30, 64, 97}) {
    const auto t = kloosterman_table(q);
    for (int64_t r = 0; r < q; ++r)
      for (int64_t s = 0; s < q; ++s) {
        const auto d = kloosterman_sum(r, s, q);
        REQUIRE(std::abs(t[static_cast<size_t>(r * q + s)] - d) < 1e-8);
      }
  }
}

TEST_CASE("Weil bound exhaustively for q <= 120") {
  for (int64_t q = 1; q <= 120; ++q) {
    const auto t = kloosterman_table(q);
    for (int64_t r = 0; r < q; ++r)
      for (int64_t s = 0; s < q; ++s) REQUIRE(std::abs(t[static_cast<size_t>(r * q + s)]) <= weil_bound(r, s, q) + 1e-7);
  }
}

TEST_CASE("Kloosterman symmetry and realness") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int64_t> dq(1, 2000);
  for (int i = 0; i < 500; ++i) {
    const int64_t q = dq(rng);
    std::uniform_int_distribution<int64_t> d(-3 * q, 3 * q);
    const int64_t r = d(rng), s = d(rng);
    const auto a = kloosterman_sum(r, s, q), b = kloosterman_sum(s, r, q);
    CHECK(std::abs(a - b) < 1e-8);
    CHECK(std::abs(a.imag()) < 1e-9);
  }
}

TEST_CASE("rect_count examples") {
  for (int64_t q : {2, 7, 12, 30}) {
    for (int64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      CHECK(rect_count({{1, q}, {1, q}}, q, a) == euler_phi(q));
      CHECK(rect_count({{1, 1}, {1, q}}, q, a) == 1);
      CHECK(rect_count({{5, 4}, {1, q}}, q, a) == 0);
    }
  }
  CHECK_THROWS(rect_count({{1, 5}, {1, 5}}, 6, 2));
}

TEST_CASE("rect_count equals brute force") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int64_t> dq(1, 40), st(-60, 60), ln(0, 50);
  for (int i = 0; i < 300; ++i) {
    const int64_t q = dq(rng);
    const int64_t a0 = st(rng), b0 = st(rng);
    const Rect r{{a0, a0 + ln(rng)}, {b0, b0 + ln(rng)}};
    for (int64_t a = 0; a < q; ++a)
      if (std::gcd(a, q) == 1) REQUIRE(rect_count(r, q, a) == brute_rect(r, q, a));
    const auto h = rect_class_counts(r, q);
    for (int64_t a = 0; a < q; ++a) REQUIRE(h[static_cast<size_t>(a)] == brute_rect(r, q, a));
  }
}

TEST_CASE("class counts partition the rectangle") {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int64_t> dq(1, 200), st(-5000, 5000), ln(0, 4000);
  for (int i = 0; i < 100; ++i) {
    const int64_t q = dq(rng);
    const Rect r{{st(rng), 0}, {st(rng), 0}};
    Rect rr = r;
    rr.I.hi = rr.I.lo + ln(rng);
    rr.J.hi = rr.J.lo + ln(rng);
    const auto h = rect_class_counts(rr, q);
    CHECK(std::accumulate(h.begin(), h.end(), int64_t{0}) == rr.I.size() * rr.J.size());
  }
}

TEST_CASE("rect_count_star examples") {
  CHECK(rect_count_star({{1, 30}, {1, 30}}, 30) == doctest::Approx(euler_phi(30)));
  CHECK(rect_count_star({{-3, 5}, {2, 8}}, 1) == doctest::Approx(9 * 7));
  CHECK(rect_count_star({{1, 1}, {1, 30}}, 30) == doctest::Approx(1.0));
}

TEST_CASE("equidist_error examples") {
  for (int64_t q : {2, 5, 12, 99}) CHECK(equidist_error({{1, q}, {1, q}}, q) == doctest::Approx(0.0));
  CHECK(equidist_error({{1, 2}, {1, 2}}, 2) == doctest::Approx(0.0));
}

TEST_CASE("equidistribution error is bounded by the calibrated shape") {
  std::mt19937_64 rng(99);
  for (int64_t q = 2; q <= 300; ++q) {
    const int64_t s = q * q;
    std::uniform_int_distribution<int64_t> st(-s, s), ln(1, s);
    for (int k = 0; k < 20; ++k) {
      const int64_t a = st(rng), b = st(rng);
      const Rect r{{a, a + ln(rng) - 1}, {b, b + ln(rng) - 1}};
      REQUIRE(equidist_error(r, q) <= kEquidistC * equidist_shape(q));
    }
  }
}
