#include "quartic/asymptotics.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "quartic/peyre.hpp"
#include "quartic/torsor.hpp"

namespace quartic {

namespace {

constexpr double kEdge = 1e-12;  // slack on the halfspace tests in log coordinates

struct LogBox {
  const RationalPolytope& D;
  int r;
  double logX;
  std::vector<std::vector<double>> a;
  std::vector<double> b;

  LogBox(const RationalPolytope& p, uint64_t X) : D(p), r(p.dim), logX(std::log(static_cast<double>(X))) {
    for (const auto& h : p.halfspaces) {
      std::vector<double> row;
      const double s = h.sense == Sense::le ? 1.0 : -1.0;
      for (const auto& c : h.coef) row.push_back(s * c.get_d());
      a.push_back(row);
      b.push_back(s * h.bound.get_d());
    }
  }

  bool contains(const std::vector<double>& t) const {
    for (double x : t)
      if (x < -kEdge) return false;
    for (size_t i = 0; i < a.size(); ++i) {
      double v = 0;
      for (int j = 0; j < r; ++j) v += a[i][static_cast<size_t>(j)] * t[static_cast<size_t>(j)];
      if (v > b[i] + kEdge) return false;
    }
    return true;
  }

  /// Range of the last coordinate n (1 ≤ n ≤ X) with the point inside, given the others.
  /// Convexity makes it an interval; the endpoints are found in log space and nudged with contains().
  std::pair<uint64_t, uint64_t> last_range(std::vector<double>& t, uint64_t X) const {
    double lo = 0, hi = 1;
    for (size_t i = 0; i < a.size(); ++i) {
      double rest = 0;
      for (int j = 0; j + 1 < r; ++j) rest += a[i][static_cast<size_t>(j)] * t[static_cast<size_t>(j)];
      const double c = a[i][static_cast<size_t>(r - 1)], room = b[i] - rest;
      if (c > 0)
        hi = std::min(hi, room / c);
      else if (c < 0)
        lo = std::max(lo, room / c);
      else if (room < -kEdge)
        return {1, 0};
    }
    if (lo > hi + kEdge) return {1, 0};
    const double Xd = static_cast<double>(X);
    auto member = [&](uint64_t n) {
      t[static_cast<size_t>(r - 1)] = std::log(static_cast<double>(n)) / logX;
      return contains(t);
    };
    uint64_t n_lo = static_cast<uint64_t>(std::clamp(std::ceil(std::exp(lo * logX)), 1.0, Xd));
    uint64_t n_hi = static_cast<uint64_t>(std::clamp(std::floor(std::exp(hi * logX)), 1.0, Xd));
    while (n_lo > 1 && member(n_lo - 1)) --n_lo;
    while (n_lo <= n_hi && !member(n_lo)) ++n_lo;
    while (n_hi < X && member(n_hi + 1)) ++n_hi;
    while (n_hi >= n_lo && !member(n_hi)) --n_hi;
    return {n_lo, n_hi};
  }
};

void check_inside_unit_cube(const RationalPolytope& p) {
  for (const auto& v : polytope_vertices(p))
    for (const auto& x : v)
      if (x < 0 || x > 1) throw std::invalid_argument("polytope must lie in [0,1]^r");
}

/// Walks every prefix (n_1..n_{r-1}) whose last-coordinate range is nonempty.
template <class Visit>
void walk(const LogBox& box, uint64_t X, Visit&& visit) {
  const int r = box.r;
  std::vector<uint64_t> n(static_cast<size_t>(r), 1);
  std::vector<double> t(static_cast<size_t>(r), 0.0);
  std::function<void(int)> rec = [&](int k) {
    if (k == r - 1) {
      auto [lo, hi] = box.last_range(t, X);
      if (lo <= hi) visit(n, lo, hi);
      return;
    }
    for (uint64_t m = 1; m <= X; ++m) {
      n[static_cast<size_t>(k)] = m;
      t[static_cast<size_t>(k)] = std::log(static_cast<double>(m)) / box.logX;
      rec(k + 1);
    }
  };
  rec(0);
}

}  // namespace

LogSum log_polytope_sum(const LogPolytopeSpec& in) {
  if (in.r < 1 || in.r > 3) throw std::invalid_argument("log_polytope_sum: r must be 1, 2 or 3");
  if (in.D.dim != in.r) throw std::invalid_argument("log_polytope_sum: dimension mismatch");
  if (in.X < 2) throw std::invalid_argument("log_polytope_sum: X must be >= 2");
  if ((in.r <= 2 && in.X > 1000000) || (in.r == 3 && in.X > 1000))
    throw std::invalid_argument("log_polytope_sum: height cap exceeded");
  check_inside_unit_cube(in.D);

  std::vector<long double> H(in.X + 1, 0.0L);
  for (uint64_t n = 1; n <= in.X; ++n) H[n] = H[n - 1] + 1.0L / static_cast<long double>(n);

  const LogBox box(in.D, in.X);
  long double sum = 0;
  walk(box, in.X, [&](const std::vector<uint64_t>& n, uint64_t lo, uint64_t hi) {
    long double w = 1;
    for (int j = 0; j + 1 < in.r; ++j) w /= static_cast<long double>(n[static_cast<size_t>(j)]);
    sum += w * (H[hi] - H[lo - 1]);
  });
  const double L = std::log(static_cast<double>(in.X));
  const double main = polytope_volume(in.D).get_d() * std::pow(L, in.r);
  return {static_cast<double>(sum), main, std::fabs(static_cast<double>(sum) - main) / std::pow(L, in.r - 1)};
}

ConvolvedSum convolved_sum_estimate(const ConvolvedInput& in) {
  if (in.r < 1 || in.r > 3 || in.C.dim != in.r) throw std::invalid_argument("convolved_sum_estimate: bad dimension");
  if (in.X < 2) throw std::invalid_argument("convolved_sum_estimate: X must be >= 2");
  check_inside_unit_cube(in.C);

  const double tail = in.tail_bound ? in.tail_bound(in.truncation) : 0.0;
  if (!(tail <= in.tail_tolerance))
    throw std::runtime_error("convolved_sum_estimate: truncation tail " + std::to_string(tail) +
                             " exceeds tolerance");
  double terms = std::pow(static_cast<double>(in.truncation), in.r);
  if (terms > static_cast<double>(in.max_terms)) throw std::runtime_error("convolved_sum_estimate: term budget exceeded");

  // lhs by direct summation over the index set
  const LogBox box(in.C, in.X);
  uint64_t visited = 0;
  long double lhs = 0;
  walk(box, in.X, [&](std::vector<uint64_t> n, uint64_t lo, uint64_t hi) {
    visited += hi - lo + 1;
    if (visited > in.max_terms) throw std::runtime_error("convolved_sum_estimate: term budget exceeded");
    long double w = 1;
    for (int j = 0; j + 1 < in.r; ++j) w /= static_cast<long double>(n[static_cast<size_t>(j)]);
    long double inner = 0;
    for (uint64_t m = lo; m <= hi; ++m) {
      n[static_cast<size_t>(in.r - 1)] = m;
      inner += in.psi(n) / static_cast<long double>(m);
    }
    lhs += w * inner;
  });

  // constant ∑_{n_i ≤ T} (Ψ∗μ)(n)/∏n
  long double constant = 0;
  std::vector<uint64_t> n(static_cast<size_t>(in.r), 1);
  std::function<void(int, long double)> rec = [&](int k, long double w) {
    if (k == in.r) {
      const double v = in.psi_mu(n);
      if (v != 0) constant += w * v;
      return;
    }
    for (uint64_t m = 1; m <= in.truncation; ++m) {
      n[static_cast<size_t>(k)] = m;
      rec(k + 1, w / static_cast<long double>(m));
    }
  };
  rec(0, 1.0L);

  const double L = std::log(static_cast<double>(in.X));
  const double main = polytope_volume(in.C).get_d() * static_cast<double>(constant) * std::pow(L, in.r);
  return {static_cast<double>(lhs), main, static_cast<double>(constant), tail,
          std::fabs(static_cast<double>(lhs) - main) / std::pow(L, in.r - 1)};
}

std::vector<RatioRow> ratio_table(Surface s, const std::vector<int64_t>& B_list, double budget_seconds,
                                  std::optional<double> c_reference) {
  for (size_t i = 1; i < B_list.size(); ++i)
    if (B_list[i] <= B_list[i - 1]) throw std::invalid_argument("ratio_table: B_list must be ascending");
  const double c = c_reference ? *c_reference : peyre_constant_cached(s).c.value;
  std::vector<RatioRow> rows;
  const auto start = std::chrono::steady_clock::now();
  double last_secs = 0;
  int64_t last_B = 0;
  bool out_of_time = false;
  for (int64_t B : B_list) {
    if (B < 1) throw std::invalid_argument("ratio_table: B must be positive");
    const double spent = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    // cost grows roughly like B log^4 B; B^1.3 is a safe projection
    const double projected =
        last_B > 0 ? last_secs * std::pow(static_cast<double>(B) / static_cast<double>(last_B), 1.3) : 0.0;
    if (out_of_time || spent + projected > budget_seconds) {
      out_of_time = true;
      rows.push_back({B, std::nullopt, 0.0, c, 0.0});
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const int64_t N = count_via_torsor(s, B).count;
    last_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    last_B = B;
    const double lb = std::log(static_cast<double>(B));
    const double ratio = N == 0 ? 0.0 : static_cast<double>(N) / (static_cast<double>(B) * std::pow(lb, 5));
    rows.push_back({B, N, ratio, c, std::fabs(ratio - c) / c});
  }
  return rows;
}

std::string ratio_csv(const std::vector<RatioRow>& rows) {
  std::ostringstream os;
  os.precision(10);
  os << "B,count,ratio,c_reference,relative_gap\n";
  for (const auto& r : rows) {
    os << r.B << ',';
    if (r.count)
      os << *r.count << ',' << r.ratio << ',' << r.c_reference << ',' << r.relative_gap << '\n';
    else
      os << "incomplete,," << r.c_reference << ",\n";
  }
  return os.str();
}

bool gap_nonincreasing(const std::vector<RatioRow>& rows, int inversions) {
  int bad = 0;
  const RatioRow* prev = nullptr;
  for (const auto& r : rows) {
    if (!r.count) continue;
    if (prev && std::fabs(r.ratio - r.c_reference) > std::fabs(prev->ratio - prev->c_reference)) ++bad;
    prev = &r;
  }
  return bad <= inversions;
}

}  // namespace quartic
