#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "quartic/polytope.hpp"
#include "quartic/surfaces.hpp"

namespace quartic {

struct LogPolytopeSpec {
  int r;
  RationalPolytope D;  // must sit inside [0,1]^r
  uint64_t X;
};

struct LogSum {
  double sum;
  double main_term;
  double normalized_error;
};

/// ∑_{n_i ≤ X} 1_D(log n / log X) / ∏ n_i against vol(D) log(X)^r.
/// Caps: r ≤ 3, X ≤ 1e6 for r ≤ 2 and X ≤ 1e3 for r = 3.
LogSum log_polytope_sum(const LogPolytopeSpec& in);

using MultiFn = std::function<double(const std::vector<uint64_t>&)>;

struct ConvolvedInput {
  int r;
  MultiFn psi;
  MultiFn psi_mu;  // Ψ ∗ μ (generalized Möbius)
  std::function<double(uint64_t)> tail_bound;  // bound on the dropped part of ∑ (Ψ∗μ)(n)/∏n past height T
  RationalPolytope C;  // index set {n : log n / log X ∈ C}
  uint64_t X;
  uint64_t truncation = 10000;
  double tail_tolerance = 1e-2;
  uint64_t max_terms = 200000000;
};

struct ConvolvedSum {
  double lhs;
  double rhs_main;
  double constant;  // truncated ∑ (Ψ∗μ)(n)/∏n
  double constant_tail;
  double normalized_error;
};

/// Throws std::runtime_error when the tail bound exceeds tail_tolerance or the term budget is exceeded.
ConvolvedSum convolved_sum_estimate(const ConvolvedInput& in);

struct RatioRow {
  int64_t B;
  std::optional<int64_t> count;  // empty when the time budget ran out
  double ratio;
  double c_reference;
  double relative_gap;
};

/// Rows are computed in order; once the projected cost of the next row would pass
/// budget_seconds the remaining rows are marked incomplete.
std::vector<RatioRow> ratio_table(Surface s, const std::vector<int64_t>& B_list, double budget_seconds = 1800,
                                  std::optional<double> c_reference = std::nullopt);

std::string ratio_csv(const std::vector<RatioRow>& rows);

/// Whether |ratio - c| is nonincreasing over the rows, allowing `inversions` exceptions.
bool gap_nonincreasing(const std::vector<RatioRow>& rows, int inversions = 1);

}  // namespace quartic
