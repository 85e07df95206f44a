#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "quartic/surfaces.hpp"
#include "quartic/torsor.hpp"

using namespace quartic;

namespace {

// independent evaluation straight from the equations
std::pair<i128, i128> f_direct(Surface s, const Point& p) {
  const i128 x0 = p[0], x1 = p[1], x2 = p[2], x3 = p[3], x4 = p[4];
  if (s == Surface::V1) return {x0 * x1 - x2 * x2, x2 * x2 + x1 * x2 + x3 * x4};
  return {x0 * x1 - x2 * x3, x1 * x2 + x2 * x4 + x3 * x4};
}

int64_t gcd5(const Point& p) {
  int64_t g = 0;
  for (auto x : p) g = std::gcd(g, x < 0 ? -x : x);
  return g;
}

}  // namespace

TEST_CASE("evaluate_quadrics examples") {
  CHECK(evaluate_quadrics(Surface::V1, {0, 0, 0, 0, 0}) == std::pair<i128, i128>{0, 0});
  CHECK(evaluate_quadrics(Surface::V1, {1, 1, 1, 0, 0}) == std::pair<i128, i128>{0, 2});
  CHECK(evaluate_quadrics(Surface::V2, {1, -2, 1, -2, -2}) == std::pair<i128, i128>{0, 0});
}

TEST_CASE("evaluate_quadrics matches direct formula on random tuples") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int64_t> d(-1000000, 1000000);
  for (int i = 0; i < 2000; ++i) {
    Point p{d(rng), d(rng), d(rng), d(rng), d(rng)};
    for (auto s : {Surface::V1, Surface::V2}) CHECK(evaluate_quadrics(s, p) == f_direct(s, p));
  }
}

TEST_CASE("evaluate_quadrics reports overflow") {
  const int64_t big = std::numeric_limits<int64_t>::max();
  // each product fits in 127 bits but the sum of three does not
  CHECK_NOTHROW(evaluate_quadrics(Surface::V1, {1, 1, big, 0, 0}));
  CHECK_THROWS_AS(evaluate_quadrics(Surface::V2, {0, big, big, big, big}), OverflowError);
}

TEST_CASE("quadric monomials have degree 2") {
  for (auto s : {Surface::V1, Surface::V2}) {
    auto q = quadrics(s);
    for (const auto* f : {&q.f1, &q.f2})
      for (const auto& m : *f) CHECK(std::accumulate(m.exp.begin(), m.exp.end(), 0) == 2);
  }
}

TEST_CASE("normalize and height examples") {
  CHECK(normalize({2, 2, 2, 2, 2}) == Point{1, 1, 1, 1, 1});
  CHECK(normalize({-1, -1, 1, 0, 2}) == Point{1, 1, -1, 0, -2});
  CHECK(normalize({0, -3, 6, 0, 9}) == Point{0, 1, -2, 0, -3});
  CHECK_THROWS(normalize({0, 0, 0, 0, 0}));
  CHECK(height({1, 1, 1, 1, 1}) == 1);
  CHECK(height({1, 1, -1, 1, -2}) == 2);
  CHECK(height({1, -2, 1, -2, -2}) == 2);
}

TEST_CASE("normalize is idempotent and scale invariant") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int64_t> d(-50, 50), k(-9, 9);
  for (int i = 0; i < 1000; ++i) {
    Point p{d(rng), d(rng), d(rng), d(rng), d(rng)};
    if (p == Point{}) continue;
    const Point n = normalize(p);
    CHECK(is_normalized(n));
    CHECK(normalize(n) == n);
    CHECK(gcd5(n) == 1);
    int64_t m = k(rng);
    if (m == 0) m = 3;
    Point q;
    for (int j = 0; j < 5; ++j) q[j] = m * p[j];
    CHECK(normalize(q) == n);
    CHECK(height(normalize(q)) == height(n));
  }
}

TEST_CASE("six lines, each contained in the surface") {
  for (auto s : {Surface::V1, Surface::V2}) {
    auto ls = lines(s);
    REQUIRE(ls.size() == 6);
    for (const auto& l : ls) {
      int found = 0;
      // integer points of the line in a small box
      for (int64_t a = -3; a <= 3; ++a)
        for (int64_t b = -3; b <= 3; ++b)
          for (int64_t c = -3; c <= 3; ++c)
            for (int64_t e = -3; e <= 3; ++e)
              for (int64_t f = -3; f <= 3; ++f) {
                Point p{a, b, c, e, f};
                if (!on_line(l, p)) continue;
                ++found;
                CHECK(f_direct(s, p) == std::pair<i128, i128>{0, 0});
              }
      CHECK(found >= 7 * 7);  // a plane of integer points (projective line)
    }
  }
}

TEST_CASE("in_open_subset examples") {
  CHECK(in_open_subset(Surface::V2, {1, -2, 1, -2, -2}));
  CHECK_FALSE(in_open_subset(Surface::V1, {1, 1, -1, 0, 1}));
  CHECK_FALSE(in_open_subset(Surface::V1, {0, 1, 0, 0, 1}));
  CHECK_THROWS(in_open_subset(Surface::V1, {1, 1, 1, 1, 1}));
}

// U = {all coordinates nonzero}: stated for V2, checked here for both against the line list
TEST_CASE("open subset equals nonvanishing coordinates, exhaustive at height <= 8") {
  const int64_t B = 8;
  for (auto s : {Surface::V1, Surface::V2}) {
    int64_t on = 0, zero = 0;
    for (int64_t x0 = 0; x0 <= B; ++x0)
      for (int64_t x1 = -B; x1 <= B; ++x1)
        for (int64_t x2 = -B; x2 <= B; ++x2)
          for (int64_t x3 = -B; x3 <= B; ++x3)
            for (int64_t x4 = -B; x4 <= B; ++x4) {
              Point p{x0, x1, x2, x3, x4};
              if (p == Point{} || !is_normalized(p)) continue;
              if (f_direct(s, p) != std::pair<i128, i128>{0, 0}) continue;
              ++on;
              const bool some_zero = x0 == 0 || x1 == 0 || x2 == 0 || x3 == 0 || x4 == 0;
              if (some_zero) ++zero;
              REQUIRE(on_any_line(s, p) == some_zero);
              REQUIRE(in_open_subset(s, p) == !some_zero);
            }
    CHECK(on > zero);
    CHECK(zero > 0);
  }
}

TEST_CASE("torsor images agree with the line test on 1000 random points") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int64_t> d(1, 6), sg(0, 1);
  for (auto s : {Surface::V1, Surface::V2}) {
    int done = 0;
    while (done < 1000) {
      Tuple9 t;
      for (auto& x : t) x = d(rng);
      t[3] *= sg(rng) ? 1 : -1;
      t[4] *= sg(rng) ? 1 : -1;
      const int64_t lead = s == Surface::V1 ? t[0] * t[5] * t[6] : t[0] * t[0] * t[5] * t[6];
      const int64_t sv = -(t[3] * t[4] + lead);
      if (sv == 0) continue;
      // pick a divisor for t8
      std::vector<int64_t> divs;
      for (int64_t k = 1; k <= (sv < 0 ? -sv : sv); ++k)
        if (sv % k == 0) divs.push_back(k);
      std::uniform_int_distribution<size_t> pick(0, divs.size() - 1);
      t[7] = divs[pick(rng)] * (sg(rng) ? 1 : -1);
      t[8] = sv / t[7];
      const Point p = torsor_to_point(s, t);
      REQUIRE(on_surface(s, p));
      CHECK(in_open_subset(s, p) == !on_any_line(s, p));
      ++done;
    }
  }
}

TEST_CASE("parse and print") {
  CHECK(parse_surface("V1") == Surface::V1);
  CHECK(parse_surface("V2") == Surface::V2);
  CHECK_THROWS(parse_surface("V3"));
  CHECK(to_string(Point{1, -2, 1, -2, -2}) == "(1,-2,1,-2,-2)");
  CHECK(to_string(static_cast<i128>(-12345)) == "-12345");
}
