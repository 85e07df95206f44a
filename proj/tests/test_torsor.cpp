#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "quartic/oracle.hpp"
#include "quartic/torsor.hpp"

using namespace quartic;

namespace {

const Tuple9 kOnes{1, 1, 1, 1, 1, 1, 1, 1, -2};

// dyadic ratio ceilings from a calibration run (100 boxes per surface, K_i <= 32): V1 16, V2 11.49
constexpr double kDyadicC_V1 = 16.0;
constexpr double kDyadicC_V2 = 12.0;

Tuple9 random_tuple(std::mt19937_64& rng, int64_t hi) {
  std::uniform_int_distribution<int64_t> d(1, hi), sg(0, 1);
  Tuple9 t;
  for (auto& x : t) x = d(rng);
  for (int i : {3, 4, 7, 8})
    if (sg(rng)) t[static_cast<size_t>(i)] = -t[static_cast<size_t>(i)];
  return t;
}

}  // namespace

TEST_CASE("validate_tuple examples") {
  CHECK(validate_tuple(Surface::V1, kOnes, 2).valid);
  auto bad = validate_tuple(Surface::V1, {1, 1, 1, 1, 1, 1, 1, 1, 1}, 10);
  CHECK_FALSE(bad.valid);
  CHECK(bad.violated == "torsor");
  CHECK(validate_tuple(Surface::V2, kOnes, 2).valid);
  CHECK_FALSE(validate_tuple(Surface::V1, kOnes, 1).valid);
  CHECK(validate_tuple(Surface::V1, {0, 1, 1, 1, 1, 1, 1, 1, -2}, 9).violated == "nonzero");
  CHECK(validate_tuple(Surface::V1, {-1, 1, 1, 1, 1, 1, 1, 1, -2}, 9).violated == "positivity");
}

TEST_CASE("validate_tuple reports coprimality labels") {
  // gcd(t4 t5, t1 t6 t7) = 2 for V1 with t1 = 2, t4 = 2: 2*1 + 2*1*1 + t8 t9 = 0 -> t8 t9 = -4
  auto v = validate_tuple(Surface::V1, {2, 1, 1, 2, 1, 1, 1, 1, -4}, 1000000);
  CHECK_FALSE(v.valid);
  CHECK(v.violated.rfind("gcd", 0) == 0);
  auto w = validate_tuple(Surface::V2, {2, 1, 1, 2, 1, 1, 1, 1, -6}, 1000000);
  CHECK_FALSE(w.valid);
  CHECK(w.violated.rfind("gcd", 0) == 0);
  CHECK(w.violated.back() == '\'');
}

TEST_CASE("torsor_to_point examples") {
  CHECK(torsor_to_point(Surface::V1, kOnes) == normalize({1, 1, 1, 1, -2}));
  CHECK(torsor_to_point(Surface::V2, kOnes) == normalize({1, -2, 1, -2, -2}));
  CHECK_THROWS(torsor_to_point(Surface::V1, {1, 1, 1, 1, 1, 1, 1, 1, 1}));
}

TEST_CASE("monomial identities hold for arbitrary tuples") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 3000; ++i) {
    const Tuple9 t = random_tuple(rng, 9);
    const auto [e1, e2, e3, e4, e5, e6, e7, e8, e9] = t;
    for (auto s : {Surface::V1, Surface::V2}) {
      const auto x = torsor_monomials(s, t);
      const i128 f1 = x[0] * x[1] - (s == Surface::V1 ? x[2] * x[2] : x[2] * x[3]);
      const i128 f2 = s == Surface::V1 ? x[2] * x[2] + x[1] * x[2] + x[3] * x[4]
                                       : x[1] * x[2] + x[2] * x[4] + x[3] * x[4];
      const i128 eq = torsor_equation(s, t);
      CHECK(f1 == 0);
      if (s == Surface::V1) {
        const i128 m = i128(e1) * e1 * e2 * e2 * e3 * e3 * e4 * e5 * e6 * e6 * e7 * e7;
        CHECK(f2 == m * eq);
        CHECK(eq == i128(e4) * e5 + i128(e1) * e6 * e7 + i128(e8) * e9);
      } else {
        const i128 m = i128(e1) * e2 * e2 * e2 * e3 * e4 * e5 * e5 * e6 * e7 * e7 * e9;
        CHECK(f2 == m * eq);
        CHECK(eq == i128(e4) * e5 + i128(e1) * e1 * e6 * e7 + i128(e8) * e9);
      }
    }
  }
}

TEST_CASE("fast count equals reference enumeration and oracle") {
  for (auto s : {Surface::V1, Surface::V2})
    for (int64_t B : {1, 2, 3, 10, 30, 60, 100, 200}) {
      const auto fast = torsor_count(s, B);
      CHECK(fast.raw % 2 == 0);
      CHECK(fast.raw == torsor_count_reference(s, B).raw);
      CHECK(fast.count == count_parametrized(s, B).count);
    }
  CHECK(count_via_torsor(Surface::V1, 1).count == 0);
  CHECK(count_via_torsor(Surface::V1, 60).count == count_full_scan(Surface::V1, 60).count);
  CHECK(count_via_torsor(Surface::V2, 60).count == count_full_scan(Surface::V2, 60).count);
}

TEST_CASE("every point has exactly two preimages, B = 100") {
  for (auto s : {Surface::V1, Surface::V2}) {
    const int64_t B = 100;
    std::map<Point, int> pre;
    for (const auto& t : enumerate_tuples_reference(s, B)) {
      REQUIRE(validate_tuple(s, t, B).valid);
      const Point p = torsor_to_point(s, t);
      REQUIRE(on_surface(s, p));
      REQUIRE(height(p) <= B);
      ++pre[p];
    }
    const auto pts = enumerate_points(s, B);
    REQUIRE(pre.size() == pts.size());
    for (const auto& p : pts) {
      auto it = pre.find(p);
      REQUIRE(it != pre.end());
      CHECK(it->second == 2);
    }
  }
}

TEST_CASE("valid tuples map to primitive points; height bound is sharp") {
  std::mt19937_64 rng(17);
  int seen = 0;
  for (int i = 0; i < 200000 && seen < 500; ++i) {
    Tuple9 t = random_tuple(rng, 4);
    for (auto s : {Surface::V1, Surface::V2}) {
      const int64_t lead = s == Surface::V1 ? t[0] * t[5] * t[6] : t[0] * t[0] * t[5] * t[6];
      const int64_t sv = -(t[3] * t[4] + lead);
      if (sv == 0 || sv % t[7] != 0) continue;
      Tuple9 u = t;
      u[8] = sv / t[7];
      auto v = validate_tuple(s, u, int64_t(1) << 40);
      if (!v.valid) continue;
      ++seen;
      const auto x = torsor_monomials(s, u);
      int64_t h = 0, g = 0;
      for (auto c : x) {
        const int64_t a = static_cast<int64_t>(c < 0 ? -c : c);
        h = std::max(h, a);
        g = std::gcd(g, a);
      }
      CHECK(g == 1);
      CHECK(validate_tuple(s, u, h).valid);
      CHECK_FALSE(validate_tuple(s, u, h - 1).valid);
    }
  }
  CHECK(seen >= 100);
}

TEST_CASE("dyadic unit box matches a 2^7 scan") {
  const DyadicBox unit{0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
  for (auto s : {Surface::V1, Surface::V2}) {
    int64_t n = 0;
    for (int mask = 0; mask < 128; ++mask) {
      int64_t m[7];
      for (int i = 0; i < 7; ++i) m[i] = (mask >> i & 1) ? -1 : 1;
      // m1, m6, m7 positive by convention
      if (m[0] < 0 || m[3] < 0 || m[4] < 0) continue;
      if (m[1] * m[2] + m[0] * m[3] * m[4] + m[5] * m[6] == 0) ++n;
    }
    CHECK(dyadic_box_count(s, unit) == n);
    CHECK(dyadic_box_count_naive(s, unit) == n);
  }
}

TEST_CASE("dyadic fast count equals naive count") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> e(-1, 2);
  for (int i = 0; i < 40; ++i) {
    DyadicBox K;
    for (auto& k : K) k = std::ldexp(1.0, e(rng));
    for (auto s : {Surface::V1, Surface::V2}) CHECK(dyadic_box_count(s, K) == dyadic_box_count_naive(s, K));
  }
}

TEST_CASE("dyadic infeasible box is empty") {
  // |m8 m9| <= 4 cannot cancel m4 m5 + m1 m6 m7 >= 32*32 + 1
  const DyadicBox K{0.5, 32, 32, 0.5, 0.5, 0.5, 1};
  CHECK(dyadic_box_count(Surface::V1, K) == 0);
  CHECK(dyadic_box_count(Surface::V2, K) == 0);
}

TEST_CASE("dyadic counts stay below the recorded constant times the reference bound") {
  for (uint64_t seed : {2024u, 77u}) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> e(-1, 5);
    double mx[2] = {0, 0};
    for (int i = 0; i < 100; ++i) {
      DyadicBox K;
      for (auto& k : K) k = std::ldexp(1.0, e(rng));
      for (auto s : {Surface::V1, Surface::V2}) {
        const double r = static_cast<double>(dyadic_box_count(s, K)) / dyadic_reference_bound(s, K);
        mx[static_cast<int>(s)] = std::max(mx[static_cast<int>(s)], r);
      }
    }
    MESSAGE("seed " << seed << ": max ratio V1 " << mx[0] << ", V2 " << mx[1]);
    CHECK(mx[0] <= kDyadicC_V1);
    CHECK(mx[1] <= kDyadicC_V2);
  }
}
