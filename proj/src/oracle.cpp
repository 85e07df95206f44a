#include "quartic/oracle.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "quartic/sieve.hpp"

namespace quartic {

std::string to_string(CountMethod m) {
  switch (m) {
    case CountMethod::full_scan: return "full_scan";
    case CountMethod::parametrized: return "parametrized";
    default: return "torsor";
  }
}

namespace {

struct PointHash {
  size_t operator()(const Point& p) const {
    uint64_t h = 1469598103934665603ull;
    for (auto x : p) h = (h ^ static_cast<uint64_t>(x)) * 1099511628211ull;
    return h;
  }
};

int64_t gcd5(const Point& p) {
  int64_t g = 0;
  for (auto x : p) g = std::gcd(g, x);
  return g;
}

inline int64_t iabs(int64_t x) { return x < 0 ? -x : x; }

template <class Emit>
void parametrized_v1(int64_t B, const FactorSieve& sv, Emit&& emit) {
  // x0 > 0 after normalization; x1 = x2^2/x0, x3 x4 = -x1 (x2 + x0).
#pragma omp for schedule(dynamic, 1) nowait
  for (int64_t x0 = 1; x0 <= B; ++x0) {
    for (int64_t x2 = -B; x2 <= B; ++x2) {
      if (x2 == 0 || x2 + x0 == 0) continue;
      int64_t sq = x2 * x2;
      if (sq % x0) continue;
      int64_t x1 = sq / x0;
      if (x1 > B) continue;
      int64_t w = x2 + x0;
      auto f = sv.factorize(static_cast<uint64_t>(x1));
      for (auto pe : sv.factorize(static_cast<uint64_t>(iabs(w)))) f.push_back(pe);
      std::sort(f.begin(), f.end());
      Factorization merged;
      for (auto [p, e] : f) {
        if (!merged.empty() && merged.back().first == p) merged.back().second += e;
        else merged.emplace_back(p, e);
      }
      int64_t r = x1 * w;  // x3 x4 = -r
      for (uint64_t d : divisors(merged)) {
        int64_t a = static_cast<int64_t>(d);
        if (a > B || iabs(r) / a > B) continue;
        for (int64_t x4 : {a, -a}) {
          int64_t x3 = -r / x4;
          Point p{x0, x1, x2, x3, x4};
          if (gcd5(p) == 1) emit(p);
        }
      }
    }
  }
}

template <class Emit>
void parametrized_v2(int64_t B, Emit&& emit) {
  // x0 > 0; x1 = x2 x3 / x0, x4 = -x1 x2 / (x2 + x3).
#pragma omp for schedule(dynamic, 1) nowait
  for (int64_t x0 = 1; x0 <= B; ++x0) {
    for (int64_t x2 = -B; x2 <= B; ++x2) {
      if (x2 == 0) continue;
      int64_t step = x0 / std::gcd(x0, iabs(x2));
      // |x1| = |x2 x3| / x0 ≤ B
      int64_t lim = std::min<int64_t>(B, (B * x0) / iabs(x2));
      lim -= lim % step;
      for (int64_t x3 = -lim; x3 <= lim; x3 += step) {
        if (x3 == 0 || x3 + x2 == 0) continue;
        int64_t x1 = x2 * x3 / x0;
        int64_t num = -x1 * x2;
        int64_t den = x2 + x3;
        if (num % den) continue;
        int64_t x4 = num / den;
        if (x4 == 0 || iabs(x4) > B) continue;
        Point p{x0, x1, x2, x3, x4};
        if (gcd5(p) == 1) emit(p);
      }
    }
  }
}

std::vector<Point> parametrized_points(Surface s, int64_t B) {
  if (B < 1) throw std::invalid_argument("B must be positive");
  std::unique_ptr<FactorSieve> sv;
  if (s == Surface::V1) sv = std::make_unique<FactorSieve>(static_cast<uint64_t>(2 * B + 1));
  std::vector<Point> local;
#pragma omp parallel
  {
    std::vector<Point> mine;
    auto emit = [&](const Point& p) { mine.push_back(p); };
    if (s == Surface::V1) parametrized_v1(B, *sv, emit);
    else parametrized_v2(B, emit);
#pragma omp critical(quartic_oracle_merge)
    local.insert(local.end(), mine.begin(), mine.end());
  }
  std::sort(local.begin(), local.end());
  if (std::adjacent_find(local.begin(), local.end()) != local.end())
    throw std::logic_error("parametrized enumeration produced a duplicate point");
  return local;
}

}  // namespace

std::vector<Point> full_scan_points(Surface s, int64_t B) {
  if (B < 1) throw std::invalid_argument("B must be positive");
  if (B > kFullScanCap)
    throw std::invalid_argument("count_full_scan: B above cap " + std::to_string(kFullScanCap) +
                                "; use count_parametrized");
  std::unordered_set<Point, PointHash> seen;
  Point p;
  for (p[0] = -B; p[0] <= B; ++p[0])
    for (p[1] = -B; p[1] <= B; ++p[1])
      for (p[2] = -B; p[2] <= B; ++p[2]) {
        if (s == Surface::V1 && p[0] * p[1] != p[2] * p[2]) continue;
        for (p[3] = -B; p[3] <= B; ++p[3]) {
          if (s == Surface::V2 && p[0] * p[1] != p[2] * p[3]) continue;
          for (p[4] = -B; p[4] <= B; ++p[4]) {
            if (gcd5(p) != 1 || !on_surface(s, p) || on_any_line(s, p)) continue;
            seen.insert(normalize(p));
          }
        }
      }
  std::vector<Point> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

CountRecord count_full_scan(Surface s, int64_t B) {
  return {s, B, CountMethod::full_scan, static_cast<int64_t>(full_scan_points(s, B).size())};
}

CountRecord count_parametrized(Surface s, int64_t B) {
  return {s, B, CountMethod::parametrized, static_cast<int64_t>(parametrized_points(s, B).size())};
}

std::vector<Point> enumerate_points(Surface s, int64_t B) { return parametrized_points(s, B); }

std::vector<int64_t> height_profile(const std::vector<Point>& pts, int64_t B) {
  std::vector<int64_t> prof(static_cast<size_t>(B + 1), 0);
  for (const auto& p : pts) {
    int64_t h = height(p);
    if (h <= B) ++prof[static_cast<size_t>(h)];
  }
  for (size_t i = 1; i < prof.size(); ++i) prof[i] += prof[i - 1];
  return prof;
}

}  // namespace quartic
