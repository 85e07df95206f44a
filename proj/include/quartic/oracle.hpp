#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "quartic/surfaces.hpp"

namespace quartic {

enum class CountMethod { full_scan, parametrized, torsor };

std::string to_string(CountMethod m);

struct CountRecord {
  Surface surface;
  int64_t B;
  CountMethod method;
  int64_t count;
};

constexpr int64_t kFullScanCap = 60;

/// Brute force over [-B,B]^5 (pruned on the first quadric). B ≤ kFullScanCap.
CountRecord count_full_scan(Surface s, int64_t B);
std::vector<Point> full_scan_points(Surface s, int64_t B);

CountRecord count_parametrized(Surface s, int64_t B);

/// Points of U with height ≤ B, each once, sorted lexicographically.
std::vector<Point> enumerate_points(Surface s, int64_t B);

/// profile[b] = number of points of height ≤ b, for b = 0..B.
std::vector<int64_t> height_profile(const std::vector<Point>& pts, int64_t B);

}  // namespace quartic
