#pragma once
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace quartic {

using i128 = __int128;
using Point = std::array<int64_t, 5>;

enum class Surface { V1, V2 };

std::string to_string(Surface s);
Surface parse_surface(const std::string& name);

struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

struct Monomial {
  int64_t coef;
  std::array<int, 5> exp;
};

struct QuadricPair {
  std::vector<Monomial> f1, f2;
};

/// A line is the common zero set of three integer linear forms.
struct Line {
  std::array<std::array<int64_t, 5>, 3> forms;
};

QuadricPair quadrics(Surface s);
std::vector<Line> lines(Surface s);

/// Exact (f1(p), f2(p)); throws OverflowError if a 128-bit intermediate overflows.
std::pair<i128, i128> evaluate_quadrics(Surface s, const Point& p);
bool on_surface(Surface s, const Point& p);

Point normalize(Point p);
bool is_normalized(const Point& p);
int64_t height(const Point& p);

bool on_line(const Line& l, const Point& p);
bool on_any_line(Surface s, const Point& p);

/// True iff p lies on none of the six lines. Requires p on the surface.
bool in_open_subset(Surface s, const Point& p);

std::string to_string(const Point& p);
std::string to_string(i128 v);

}  // namespace quartic
