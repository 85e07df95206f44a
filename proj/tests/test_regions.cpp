#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "quartic/regions.hpp"

using namespace quartic;

namespace {

// error/reference_bound ceiling for the X = 1e4 families below; calibration max 0.52 over q = 10..460
constexpr double kRegionC = 1.0;
// band count/bound ceiling; calibration max 2.81 over 1000 draws (seed 5)
constexpr double kBandC = 4.0;

RegionParams small_s() {
  RegionParams p;
  p.X = 10, p.X1 = 10, p.X2 = 10, p.T = 2, p.Z = 1, p.L1 = 1, p.L2 = 1;
  return p;
}

// admits exactly (1,1) and (-1,-1): the conditions only see |x|, |y| and xy
RegionParams pair_region() {
  RegionParams p;
  p.X = 2, p.X1 = 3, p.X2 = 1, p.T = 2, p.Z = 2, p.L1 = 1, p.L2 = 1;
  return p;
}

RegionParams family_s() {
  RegionParams s;
  s.X = 1e4, s.X1 = 3e5, s.X2 = 2e3, s.T = 5e3, s.Z = 10;
  return s;
}

RegionParams family_s2() {
  RegionParams s;
  s.variant = RegionVariant::S2;
  s.X = 1e4, s.X1 = 500, s.X2 = 1e5, s.X3 = 1e7, s.T = 5e3, s.Z = 10;
  return s;
}

int64_t brute_total(const RegionParams& p, int64_t R) {
  int64_t n = 0;
  for (int64_t u = -R; u <= R; ++u)
    for (int64_t v = -R; v <= R; ++v)
      if (region_contains(p, static_cast<double>(u), static_cast<double>(v))) ++n;
  return n;
}

}  // namespace

TEST_CASE("region_contains examples") {
  auto p = small_s();
  CHECK(region_contains(p, 1, 1));
  CHECK_FALSE(region_contains(p, 0.5, 1));
  p.Z = 5;
  CHECK_FALSE(region_contains(p, 1, 1));
  CHECK(region_contains_exact(small_s(), mpq_class(1), mpq_class(1)));
}

TEST_CASE("boundary is non-strict") {
  auto p = small_s();
  // |xy| = X exactly, |x||xy+T| = 2*12 > X1 so widen X1
  p.X1 = 24;
  CHECK(region_contains(p, 2, 5));
  CHECK(region_contains_exact(p, mpq_class(2), mpq_class(5)));
  p.X1 = 23.999;
  CHECK_FALSE(region_contains(p, 2, 5));
}

TEST_CASE("validate") {
  auto p = small_s();
  p.T = 11;
  CHECK_THROWS(validate(p));
  p.T = 2, p.X = -1;
  CHECK_THROWS(validate(p));
  RegionParams q = family_s2();
  q.T = 2e4;
  CHECK_NOTHROW(validate(q));
  q.T = 2.1e4;
  CHECK_THROWS(validate(q));
}

TEST_CASE("D_count examples") {
  const auto p = pair_region();
  CHECK(build_sections(p).total() == 2);
  CHECK(D_count(p, 3, 1) == 2);
  CHECK(D_count(p, 3, 2) == 0);
  const auto s = small_s();
  CHECK(D_count(s, 1, 0) == build_sections(s).total());
  CHECK(build_sections(s).total() == brute_total(s, 12));
}

TEST_CASE("D_star examples") {
  const auto s = small_s();
  CHECK(D_star(s, 1) == doctest::Approx(static_cast<double>(build_sections(s).total())));
  auto e = small_s();
  e.L1 = 11;
  CHECK(D_star(e, 7) == 0.0);
  CHECK(build_sections(e).total() == 0);
  // brute force over the bounding box
  for (int64_t q : {4, 9, 10}) {
    int64_t n = 0;
    for (int64_t u = -12; u <= 12; ++u)
      for (int64_t v = -12; v <= 12; ++v)
        if (std::gcd(u * v, q) == 1 && region_contains(s, static_cast<double>(u), static_cast<double>(v))) ++n;
    CHECK(D_star(s, q) == doctest::Approx(static_cast<double>(n) / static_cast<double>(euler_phi(q))));
  }
}

TEST_CASE("D_count bucketing = naive on random regions") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> X(5, 200), f(0.05, 1.0);
  std::uniform_int_distribution<int> var(0, 2), qd(1, 30);
  for (int i = 0; i < 50; ++i) {
    RegionParams p;
    p.variant = static_cast<RegionVariant>(var(rng));
    p.X = X(rng);
    p.T = p.X * f(rng);
    p.X1 = p.X * 20 * f(rng);
    p.X2 = p.X * 2 * f(rng);
    p.X3 = p.X * p.X * f(rng);
    p.Z = 1 + 5 * f(rng);
    p.L1 = 1 + 3 * f(rng);
    p.L2 = 1 + 3 * f(rng);
    const auto sec = build_sections(p);
    const int64_t q = qd(rng);
    for (int64_t a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      INFO("region " << i << " q=" << q << " a=" << a);
      CHECK(D_count(sec, q, a) == D_count_naive(p, q, a));
    }
  }
}

TEST_CASE("class counts partition the region") {
  for (const auto& p : {family_s(), family_s2(), small_s()}) {
    const auto sec = build_sections(p);
    for (int64_t q : {1, 2, 12, 97, 210}) {
      const auto h = D_class_counts(sec, q);
      CHECK(std::accumulate(h.begin(), h.end(), int64_t{0}) == sec.total());
    }
  }
}

TEST_CASE("error_profile boundedness") {
  std::vector<int64_t> qs;
  for (int64_t q = 10; q <= 100; ++q) qs.push_back(q);
  for (const auto& p : {family_s(), family_s2()}) {
    const auto prof = error_profile(p, qs);
    REQUIRE(prof.rows.size() == qs.size());
    for (size_t i = 1; i < prof.rows.size(); ++i) CHECK(prof.rows[i - 1].q < prof.rows[i].q);
    for (const auto& r : prof.rows) {
      INFO("q=" << r.q);
      CHECK(r.ratio <= kRegionC);
      CHECK(r.reference_bound > 0);
    }
  }
}

TEST_CASE("error_profile degenerate and excluded q") {
  auto p = family_s();
  p.L1 = 2e4;
  const auto prof = error_profile(p, {10, 20, 30, 1000});
  CHECK(prof.rows.size() == 3);
  CHECK(prof.notes.size() == 1);
  for (const auto& r : prof.rows) CHECK(r.max_error == 0.0);
  CHECK(profile_csv(prof).rfind("q,max_error,reference_bound,ratio\n", 0) == 0);
}

TEST_CASE("reference bound shapes") {
  auto s = family_s();
  const double q = 50, phi = 20;
  CHECK(reference_bound(s, 50) == doctest::Approx(std::pow(1e4, 2.0 / 3 + 0.05) / std::sqrt(q) + 1e4 / phi * 2));
  auto s2 = family_s2();
  CHECK(reference_bound(s2, 50) == doctest::Approx(std::pow(1e4, 0.8 + 0.05) / std::pow(q, 0.7) + 1e4 / phi * 2));
}

TEST_CASE("quadratic_band_count examples") {
  CHECK(quadratic_band_count(0, 4, 0).count == 4);
  CHECK(quadratic_band_count(0, 0.5, 0.4).count == 0);
  // Y' < 0 leaves only |y^2 + 2Ay| <= Y
  CHECK(quadratic_band_count(1.5, 10, -3).count == quadratic_band_count_naive(1.5, 10, -1e-300));
  CHECK(quadratic_band_count(1.5, 10, -3).count == quadratic_band_count(1.5, 10, -100).count);
  CHECK_THROWS(quadratic_band_count(0, 0, -1));
}

TEST_CASE("quadratic_band_count vs naive and shape") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> A(-1000, 1000), ly(-1, 6), fr(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double a = A(rng), Y = std::pow(10, ly(rng)), Yp = Y * fr(rng);
    const auto b = quadratic_band_count(a, Y, Yp);
    INFO("A=" << a << " Y=" << Y << " Y'=" << Yp);
    CHECK(b.count == quadratic_band_count_naive(a, Y, Yp));
    CHECK(b.count <= kBandC * b.bound);
  }
}
