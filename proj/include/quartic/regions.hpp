#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "quartic/kloosterman.hpp"

namespace quartic {

enum class RegionVariant { S, S1, S2 };

struct RegionParams {
  RegionVariant variant = RegionVariant::S;
  double X = 1, X1 = 1, X2 = 1, X3 = 1, T = 1, Z = 1, L1 = 1, L2 = 1;
};

/// Throws std::invalid_argument on nonpositive fields or T above its variant cap.
void validate(const RegionParams& p);

bool region_contains(const RegionParams& p, double x, double y);
bool region_contains_exact(const RegionParams& p, const mpq_class& x, const mpq_class& y);

/// Integer points of a region as v-intervals per integer u.
struct Section {
  int64_t u;
  std::vector<Interval> v;
};

struct RegionSections {
  RegionParams params;
  std::vector<Section> rows;
  int64_t total() const;
};

RegionSections build_sections(const RegionParams& p);

int64_t D_count(const RegionSections& r, int64_t q, int64_t a);
int64_t D_count(const RegionParams& p, int64_t q, int64_t a);
/// Double loop over the bounding box with exact membership; small regions only.
int64_t D_count_naive(const RegionParams& p, int64_t q, int64_t a);
/// Count of integer points with uv in each residue class mod q, units or not.
std::vector<int64_t> D_class_counts(const RegionSections& r, int64_t q);
double D_star(const RegionSections& r, int64_t q);
double D_star(const RegionParams& p, int64_t q);

struct ProfileRow {
  int64_t q;
  double max_error;
  double reference_bound;
  double ratio;
};

struct Profile {
  std::vector<ProfileRow> rows;
  std::vector<std::string> notes;
};

double reference_bound(const RegionParams& p, int64_t q, double eps = 0.05);
Profile error_profile(const RegionParams& p, const std::vector<int64_t>& qs, double eps = 0.05);
std::string profile_csv(const Profile& prof);

struct BandCount {
  int64_t count;
  double bound;
};

/// #{y ∈ Z : Y' < |y^2 + 2Ay| ≤ Y} and δ^(1/2) M + 1.
BandCount quadratic_band_count(double A, double Y, double Yp);
int64_t quadratic_band_count_naive(double A, double Y, double Yp);

}  // namespace quartic
