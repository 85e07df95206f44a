#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <random>

#include "quartic/peyre.hpp"

using namespace quartic;

namespace {

const Variant kVariants[] = {Variant::V1, Variant::V2a, Variant::V2b};

// expected local factor from the closed forms of φ' and the density
Rational expected_local(uint64_t p) {
  const Rational ip(1, p);
  return (1 + 6 * ip + ip * ip) / (1 + ip - ip * ip);
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

uint64_t ipow(uint64_t p, int k) {
  uint64_t r = 1;
  while (k-- > 0) r *= p;
  return r;
}

// grid scan of {t4 : h(t4, u, w) <= 1} on [-R, R]
double scan_measure(Variant v, double u, double w, double R, double step) {
  int64_t hits = 0;
  const auto n = static_cast<int64_t>(2 * R / step);
  for (int64_t i = 0; i < n; ++i) {
    const double t4 = -R + (static_cast<double>(i) + 0.5) * step;
    if (density_h(v, {t4, u, w}) <= 1) ++hits;
  }
  return static_cast<double>(hits) * step;
}

}  // namespace

TEST_CASE("polytope volume examples") {
  CHECK(polytope_volume(unit_cube(5)) == 1);
  CHECK(polytope_volume(standard_simplex(5)) == Rational(1, 120));
  RationalPolytope open{5, {}};
  CHECK_THROWS(polytope_volume(open));
}

TEST_CASE("alpha constants") {
  CHECK(polytope_volume(alpha_polytope(Variant::V1)) == Rational(1, 1440));
  const auto a1 = alpha_constants(Surface::V1);
  CHECK(a1.alpha == Rational(1, 1440));
  CHECK_FALSE(a1.alpha_a.has_value());
  const auto a2 = alpha_constants(Surface::V2);
  REQUIRE(a2.alpha_a.has_value());
  REQUIRE(a2.alpha_b.has_value());
  CHECK(*a2.alpha_a == Rational(1871, 2016000));
  CHECK(*a2.alpha_b == Rational(929, 2016000));
  CHECK(*a2.alpha_a + *a2.alpha_b == Rational(1, 720));
  CHECK(a2.alpha == Rational(1, 2160));
}

TEST_CASE("alpha volumes vs Monte Carlo") {
  uint64_t seed = 11;
  for (Variant v : kVariants) {
    const auto P = alpha_polytope(v);
    const double exact = polytope_volume(P).get_d();
    const auto mc = polytope_volume_mc(P, 10000000, seed++);
    INFO(to_string(v) << " exact " << exact << " mc " << mc.estimate << " se " << mc.std_error);
    CHECK(std::fabs(mc.estimate - exact) <= 3 * mc.std_error);
  }
}

TEST_CASE("density_h examples") {
  CHECK(density_h(Variant::V1, {0, 0, 0}) == 0);
  CHECK(density_h(Variant::V1, {1, 1, 1}) == 2);
  CHECK(density_h(Variant::V2a, {1, 1, 1}) == 2);
  CHECK(density_h(Variant::V2b, {0, 0, 0}) == 0);
}

TEST_CASE("V1 region forces |t5| <= 1 and t6 <= 1") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-3, 3), W(0, 3);
  int inside = 0;
  for (int i = 0; i < 200000; ++i) {
    const double t4 = U(rng), t5 = U(rng), t6 = W(rng);
    if (density_h(Variant::V1, {t4, t5, t6}) > 1) continue;
    ++inside;
    CHECK(std::fabs(t5) <= 1);
    CHECK(t6 <= 1);
  }
  CHECK(inside > 0);
  CHECK(density_h(Variant::V1, {0.25, 0.25, 0.25}) < 1);
}

TEST_CASE("inner measure vs grid scan") {
  const double step = 1e-4;
  for (Variant v : kVariants)
    for (auto [u, w] : {std::pair{0.3, 0.5}, {-0.7, 0.2}, {0.05, 0.9}, {-0.2, 0.95}}) {
      const double a = density_inner_measure(v, u, w);
      const double b = scan_measure(v, u, w, 40, step);
      INFO(to_string(v) << " u=" << u << " w=" << w);
      // each interval endpoint can be off by one grid cell
      CHECK(std::fabs(a - b) <= 8 * step);
    }
}

TEST_CASE("archimedean densities") {
  const auto d1 = archimedean_density(Surface::V1, 1e-3);
  CHECK(d1.value > 0);
  CHECK(d1.error < 1e-3 * d1.value);
  const auto d2 = archimedean_density(Surface::V2, 1e-3);
  REQUIRE(d2.via_a.has_value());
  REQUIRE(d2.via_b.has_value());
  CHECK(d2.via_a->value > 0);
  CHECK(d2.via_b->value > 0);
  CHECK(std::fabs(d2.via_a->value - d2.via_b->value) <= 2 * (d2.via_a->error + d2.via_b->error));
  CHECK(d2.value == d2.via_a->value);
  CHECK_THROWS(archimedean_density(Surface::V1, 1e-5));
}

TEST_CASE("euler factors") {
  CHECK(euler_factor(2) == Rational(17, 256));
  CHECK(euler_factor(3) == Rational(1792, 6561));
  for (uint64_t p = 2; p < 2000; ++p) {
    if (!is_prime(p)) continue;
    const auto f = euler_factor(p);
    CHECK(f > 0);
    CHECK(f < 1);
  }
}

TEST_CASE("euler product tail") {
  const auto a = euler_product(100000), b = euler_product(1000000);
  CHECK(a.value >= b.value);
  CHECK(a.value - b.value <= a.tail_bound);
  CHECK(b.tail_bound < a.tail_bound);
  const auto small = euler_product(3);
  CHECK(small.value == doctest::Approx(Rational(Rational(17, 256) * Rational(1792, 6561)).get_d()));
}

TEST_CASE("theta depends only on the support pattern") {
  for (Variant v : kVariants)
    for (uint64_t p : {2, 3, 5}) {
      for (int mask = 0; mask < 243; ++mask) {
        std::array<uint64_t, 5> n{}, r{};
        int m = mask;
        for (int i = 0; i < 5; ++i, m /= 3) {
          n[static_cast<size_t>(i)] = ipow(p, m % 3);
          r[static_cast<size_t>(i)] = m % 3 ? p : 1;
        }
        CHECK(theta_value(v, n) == theta_value(v, r));
      }
    }
}

TEST_CASE("theta local factors") {
  for (Variant v : kVariants) {
    CHECK(theta_value(v, {1, 1, 1, 1, 1}) == 1);
    for (uint64_t p : {2, 3, 5, 7, 11, 97}) {
      INFO(to_string(v) << " p=" << p);
      CHECK(theta_local_factor(v, p) == expected_local(p));
      CHECK(theta_expected(p) == expected_local(p));
    }
  }
}

TEST_CASE("theta local factor by truncated exponent sum") {
  // ∑ over k ∈ [0,K]^5 of Θ(p^k) p^(-|k|), plus the geometric remainder bound
  const uint64_t p = 5;
  const int K = 6;
  for (Variant v : kVariants) {
    double s = 0;
    for (int idx = 0; idx < 7 * 7 * 7 * 7 * 7; ++idx) {
      std::array<uint64_t, 5> n{};
      int m = idx, k = 0;
      for (int i = 0; i < 5; ++i, m /= 7) {
        n[static_cast<size_t>(i)] = ipow(p, m % 7);
        k += m % 7;
      }
      s += theta_value(v, n).get_d() * std::pow(static_cast<double>(p), -k);
    }
    CHECK(s == doctest::Approx(expected_local(p).get_d()).epsilon(1e-4));
  }
}

TEST_CASE("peyre constant assembly") {
  const auto b = peyre_constant(Surface::V1, 1e-3, 100000);
  CHECK(b.beta == 1);
  CHECK(b.alpha == Rational(1, 1440));
  CHECK(b.c.value > 0);
  const double prod = b.alpha.get_d() * b.omega_infinity.value * b.euler.value;
  CHECK(b.c.value == doctest::Approx(prod).epsilon(1e-12));
  CHECK(b.c.error > 0);
  CHECK(b.c.error < 1e-2 * b.c.value);

  const auto j = nlohmann::json::parse(to_json(b));
  for (const char* k : {"surface", "alpha", "alpha_value", "beta", "omega_infinity", "omega_infinity_error",
                        "euler_product", "euler_tail_bound", "prime_limit", "c", "c_error"})
    CHECK(j.contains(k));
  CHECK(j["beta"] == 1);
  CHECK(j["alpha"] == "1/1440");

  const auto b2 = peyre_constant(Surface::V2, 1e-3, 100000);
  CHECK(b2.alpha == Rational(1, 2160));
  CHECK(b2.omega_infinity_b.has_value());
  CHECK(nlohmann::json::parse(to_json(b2)).contains("omega_infinity_alt"));
}
