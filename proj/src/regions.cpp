#include "quartic/regions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace quartic {

namespace {

using ld = long double;

enum Cond { kA, kB, kC, kD, kE, kE2, kF, kG, kH, kI, kJ, kCount };

const std::vector<Cond>& conditions(RegionVariant v) {
  static const std::vector<Cond> s{kA, kB, kC, kD, kE, kE2};
  static const std::vector<Cond> s1{kA, kB, kC, kD, kE, kE2, kF, kG};
  static const std::vector<Cond> s2{kA, kD, kE, kE2, kF, kH, kI, kJ};
  return v == RegionVariant::S ? s : v == RegionVariant::S1 ? s1 : s2;
}

template <class N>
struct Params {
  N X, X1, X2, X3, T, Z, L1, L2;
};

template <class N>
N nabs(const N& v) {
  return v < 0 ? N(-v) : v;
}

/// lhs and rhs of condition c; the condition is lhs ≤ rhs.
template <class N>
std::pair<N, N> sides(Cond c, const Params<N>& p, const N& x, const N& y) {
  const N ax = nabs(x), ay = nabs(y);
  const N w = nabs(N(x * y + p.T));
  switch (c) {
    case kA: return {nabs(N(x * y)), p.X};
    case kB: return {ax * w, p.X1};
    case kC: return {ay, p.X2};
    case kD: return {p.Z, w};
    case kE: return {p.L1, ax};
    case kE2: return {p.L2, ay};
    case kF: return {w, p.X};
    case kG: return {ax * y * y, p.X3};
    case kH: return {ax, p.X1};
    case kI: return {ay * w, p.X2};
    default: return {ax * y * y * w, p.X3};
  }
}

template <class N>
Params<N> convert(const RegionParams& r) {
  return {N(r.X), N(r.X1), N(r.X2), N(r.X3), N(r.T), N(r.Z), N(r.L1), N(r.L2)};
}

struct Checker {
  RegionVariant variant;
  Params<ld> fast;
  Params<mpq_class> exact;

  explicit Checker(const RegionParams& r)
      : variant(r.variant), fast(convert<ld>(r)), exact(convert<mpq_class>(r)) {}

  bool contains(int64_t u, int64_t v) const {
    bool uncertain = false;
    const ld x = static_cast<ld>(u), y = static_cast<ld>(v);
    for (Cond c : conditions(variant)) {
      auto [l, r] = sides(c, fast, x, y);
      const ld scale = std::max({std::fabs(l), std::fabs(r), ld(1)});
      if (std::fabs(r - l) <= 1e-12L * scale) {
        uncertain = true;
        continue;
      }
      if (l > r) return false;
    }
    if (!uncertain) return true;
    const mpq_class xq(static_cast<long>(u)), yq(static_cast<long>(v));
    for (Cond c : conditions(variant)) {
      auto [l, r] = sides(c, exact, xq, yq);
      if (l > r) return false;
    }
    return true;
  }
};

// Real roots of c0 + c1 v + c2 v^2 + c3 v^3 in [lo, hi].
void poly_roots(const std::array<ld, 4>& c, int deg, ld lo, ld hi, std::vector<ld>& out) {
  while (deg > 0 && c[static_cast<size_t>(deg)] == 0) --deg;
  if (deg <= 0) return;
  if (deg == 1) {
    const ld r = -c[0] / c[1];
    if (r >= lo && r <= hi) out.push_back(r);
    return;
  }
  auto f = [&](ld v) {
    ld s = 0;
    for (int i = deg; i >= 0; --i) s = s * v + c[static_cast<size_t>(i)];
    return s;
  };
  std::array<ld, 4> d{};
  for (int i = 1; i <= deg; ++i) d[static_cast<size_t>(i - 1)] = i * c[static_cast<size_t>(i)];
  std::vector<ld> pts{lo};
  poly_roots(d, deg - 1, lo, hi, pts);
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    ld a = pts[i], b = pts[i + 1];
    ld fa = f(a), fb = f(b);
    if (fa == 0) {
      out.push_back(a);
      continue;
    }
    if ((fa < 0) == (fb < 0)) continue;
    for (int it = 0; it < 200 && a < b; ++it) {
      const ld m = a + (b - a) / 2;
      if (m <= a || m >= b) break;
      const ld fm = f(m);
      if ((fm < 0) == (fa < 0)) a = m, fa = fm;
      else b = m;
    }
    out.push_back(a);
  }
  if (f(hi) == 0) out.push_back(hi);
}

/// Integer intervals of {v ∈ [vlo, vhi] : pred(v)}, given every point where pred can change.
std::vector<Interval> integer_set(std::vector<ld> breaks, int64_t vlo, int64_t vhi,
                                  const std::function<bool(int64_t)>& pred) {
  std::vector<Interval> out;
  auto add = [&](int64_t lo, int64_t hi) {
    if (lo > hi) return;
    if (!out.empty() && out.back().hi + 1 == lo) out.back().hi = hi;
    else out.push_back({lo, hi});
  };
  std::sort(breaks.begin(), breaks.end());
  std::vector<std::pair<ld, ld>> near;
  for (ld r : breaks) {
    const ld g = 1e-9L * (1 + std::fabs(r));
    if (!near.empty() && r - g <= near.back().second) near.back().second = std::max(near.back().second, r + g);
    else near.emplace_back(r - g, r + g);
  }
  int64_t cursor = vlo;
  auto far = [&](int64_t lo, int64_t hi) {
    if (lo <= hi && pred(lo)) add(lo, hi);
  };
  for (auto [a, b] : near) {
    if (b < static_cast<ld>(cursor)) continue;
    if (a > static_cast<ld>(vhi)) break;
    const auto ca = static_cast<int64_t>(std::ceil(a));
    const auto fb = static_cast<int64_t>(std::floor(b));
    far(cursor, std::min(vhi, ca - 1));
    for (int64_t v = std::max(cursor, ca); v <= std::min(vhi, fb); ++v)
      if (pred(v)) add(v, v);
    cursor = std::max(cursor, fb + 1);
  }
  far(cursor, vhi);
  return out;
}

std::vector<ld> section_breaks(const RegionParams& p, int64_t u) {
  const ld x = static_cast<ld>(u), ax = std::fabs(x), T = p.T;
  std::vector<ld> br{0, -T / x};
  for (int sg : {-1, 1}) {
    br.push_back(sg * ld(p.X) / ax);
    br.push_back((sg * ld(p.X1) / ax - T) / x);
    br.push_back(sg * ld(p.X2));
    br.push_back((sg * ld(p.Z) - T) / x);
    br.push_back(sg * ld(p.L2));
    br.push_back((sg * ld(p.X) - T) / x);
    br.push_back(sg * std::sqrt(ld(p.X3) / ax));
  }
  const ld vmax = ld(p.X) / ax + 2;
  for (int sg : {-1, 1}) {
    // v (x v + T) = ±X2 and |x| v^2 (x v + T) = ±X3
    poly_roots({-sg * ld(p.X2), T, x, 0}, 2, -vmax, vmax, br);
    poly_roots({-sg * ld(p.X3), 0, ax * T, ax * x}, 3, -vmax, vmax, br);
  }
  return br;
}

}  // namespace

void validate(const RegionParams& p) {
  for (double v : {p.X, p.X1, p.X2, p.X3, p.T, p.Z, p.L1, p.L2})
    if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument("region parameters must be positive and finite");
  if (p.variant == RegionVariant::S && p.T > p.X) throw std::invalid_argument("region S requires T <= X");
  if (p.variant != RegionVariant::S && p.T > 2 * p.X) throw std::invalid_argument("regions S1/S2 require T <= 2X");
}

bool region_contains(const RegionParams& p, double x, double y) {
  const auto q = convert<ld>(p);
  for (Cond c : conditions(p.variant)) {
    auto [l, r] = sides(c, q, static_cast<ld>(x), static_cast<ld>(y));
    if (l > r) return false;
  }
  return true;
}

bool region_contains_exact(const RegionParams& p, const mpq_class& x, const mpq_class& y) {
  const auto q = convert<mpq_class>(p);
  for (Cond c : conditions(p.variant)) {
    auto [l, r] = sides(c, q, x, y);
    if (l > r) return false;
  }
  return true;
}

int64_t RegionSections::total() const {
  int64_t t = 0;
  for (const auto& row : rows)
    for (const auto& iv : row.v) t += iv.size();
  return t;
}

RegionSections build_sections(const RegionParams& p) {
  validate(p);
  RegionSections out{p, {}};
  const Checker chk(p);
  double umax_d = p.X / p.L2 + 1;
  if (p.variant == RegionVariant::S2) umax_d = std::min(umax_d, p.X1 + 1);
  if (umax_d > 5e7) throw std::invalid_argument("region too large to enumerate");
  const auto umax = static_cast<int64_t>(std::floor(umax_d));
  const auto umin = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(p.L1)) - 1);
  for (int64_t au = umin; au <= umax; ++au) {
    for (int64_t u : {-au, au}) {
      const auto vb = static_cast<int64_t>(std::ceil(p.X / static_cast<double>(au))) + 1;
      auto iv = integer_set(section_breaks(p, u), -vb, vb, [&](int64_t v) { return chk.contains(u, v); });
      if (!iv.empty()) out.rows.push_back({u, std::move(iv)});
    }
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const Section& a, const Section& b) { return a.u < b.u; });
  return out;
}

int64_t D_count(const RegionSections& r, int64_t q, int64_t a) {
  if (q < 1) throw std::invalid_argument("D_count: q must be positive");
  const int64_t am = ((a % q) + q) % q;
  if (std::gcd(am, q) != 1) throw std::invalid_argument("D_count: a not coprime to q");
  int64_t total = 0;
  for (const auto& row : r.rows) {
    const int64_t um = ((row.u % q) + q) % q;
    if (std::gcd(um, q) != 1) continue;
    const int64_t t = q == 1 ? 0 : am * mod_inverse(um, q) % q;
    for (const auto& iv : row.v) total += count_in_class(iv, q, t);
  }
  return total;
}

int64_t D_count(const RegionParams& p, int64_t q, int64_t a) { return D_count(build_sections(p), q, a); }

int64_t D_count_naive(const RegionParams& p, int64_t q, int64_t a) {
  validate(p);
  const int64_t am = ((a % q) + q) % q;
  if (std::gcd(am, q) != 1) throw std::invalid_argument("D_count: a not coprime to q");
  const auto ub = static_cast<int64_t>(p.X / p.L2) + 2;
  int64_t total = 0;
  for (int64_t u = -ub; u <= ub; ++u) {
    if (u == 0) continue;
    const auto vb = static_cast<int64_t>(p.X / static_cast<double>(u < 0 ? -u : u)) + 2;
    for (int64_t v = -vb; v <= vb; ++v) {
      if ((((u * v) % q) + q) % q != am) continue;
      if (region_contains_exact(p, mpq_class(static_cast<long>(u)), mpq_class(static_cast<long>(v)))) ++total;
    }
  }
  return total;
}

std::vector<int64_t> D_class_counts(const RegionSections& r, int64_t q) {
  std::vector<int64_t> h(static_cast<size_t>(q), 0);
  int64_t offset = 0;
  for (const auto& row : r.rows) {
    const int64_t um = ((row.u % q) + q) % q;
    const bool unit = std::gcd(um, q) == 1;
    for (const auto& iv : row.v) {
      const int64_t k = iv.size() / q;
      if (k > 0) {
        if (unit) offset += k;
        else
          for (int64_t x = 0; x < q; ++x) h[static_cast<size_t>(um * x % q)] += k;
      }
      for (int64_t v = iv.lo + k * q; v <= iv.hi; ++v) h[static_cast<size_t>(um * (((v % q) + q) % q) % q)] += 1;
    }
  }
  for (auto& x : h) x += offset;
  return h;
}

double D_star(const RegionSections& r, int64_t q) {
  int64_t units = 0;
  for (const auto& row : r.rows) {
    if (std::gcd(((row.u % q) + q) % q, q) != 1) continue;
    for (const auto& iv : row.v) units += count_units(iv, q);
  }
  return static_cast<double>(units) / static_cast<double>(euler_phi(q));
}

double D_star(const RegionParams& p, int64_t q) { return D_star(build_sections(p), q); }

double reference_bound(const RegionParams& p, int64_t q, double eps) {
  const double tail = p.X / static_cast<double>(euler_phi(q)) * (1.0 / p.L1 + 1.0 / p.L2);
  const double qd = static_cast<double>(q);
  if (p.variant == RegionVariant::S2) return std::pow(p.X, 0.8 + eps) / std::pow(qd, 0.7) + tail;
  return std::pow(p.X, 2.0 / 3.0 + eps) / std::sqrt(qd) + tail;
}

Profile error_profile(const RegionParams& p, const std::vector<int64_t>& qs, double eps) {
  Profile prof;
  const auto sec = build_sections(p);
  std::vector<int64_t> sorted(qs);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const double qmax = std::pow(p.X, 2.0 / 3.0);
  for (int64_t q : sorted) {
    if (q < 1) throw std::invalid_argument("error_profile: q must be positive");
    if (static_cast<double>(q) > qmax) {
      prof.notes.push_back("q=" + std::to_string(q) + " excluded: above X^(2/3)");
      continue;
    }
    const auto h = D_class_counts(sec, q);
    int64_t units = 0;
    for (int64_t a = 0; a < q; ++a)
      if (std::gcd(a, q) == 1) units += h[static_cast<size_t>(a)];
    const double star = static_cast<double>(units) / static_cast<double>(euler_phi(q));
    double worst = 0.0;
    for (int64_t a = 0; a < q; ++a)
      if (std::gcd(a, q) == 1) worst = std::max(worst, std::fabs(static_cast<double>(h[static_cast<size_t>(a)]) - star));
    const double ref = reference_bound(p, q, eps);
    prof.rows.push_back({q, worst, ref, worst / ref});
  }
  return prof;
}

std::string profile_csv(const Profile& prof) {
  std::ostringstream os;
  os.precision(10);
  os << "q,max_error,reference_bound,ratio\n";
  for (const auto& r : prof.rows) os << r.q << ',' << r.max_error << ',' << r.reference_bound << ',' << r.ratio << '\n';
  return os.str();
}

namespace {

bool band_exact(const mpq_class& A, const mpq_class& Y, const mpq_class& Yp, int64_t y) {
  const mpq_class yq(static_cast<long>(y));
  mpq_class f = yq * yq + 2 * A * yq;
  if (f < 0) f = -f;
  return Yp < f && f <= Y;
}

}  // namespace

BandCount quadratic_band_count(double A, double Y, double Yp) {
  if (!(Y > 0) || !(Yp < Y)) throw std::invalid_argument("quadratic_band_count: need Y > 0 and Y' < Y");
  const mpq_class Aq(A), Yq(Y), Ypq(Yp);
  const ld a = A, c = a * a;
  std::vector<ld> br{-a};
  for (ld t : {ld(Y), ld(-Y), ld(Yp), ld(-Yp)})
    if (c + t >= 0) {
      br.push_back(-a + std::sqrt(c + t));
      br.push_back(-a - std::sqrt(c + t));
    }
  const ld reach = std::sqrt(c + ld(Y)) + 2;
  const auto lo = static_cast<int64_t>(std::floor(-a - reach)), hi = static_cast<int64_t>(std::ceil(-a + reach));
  int64_t count = 0;
  for (const auto& iv : integer_set(br, lo, hi, [&](int64_t y) { return band_exact(Aq, Yq, Ypq, y); }))
    count += iv.size();
  const double M = std::max(std::fabs(A), std::sqrt(Y));
  const double delta = std::min(1.0, (Y - Yp) / (M * M));
  return {count, std::sqrt(delta) * M + 1};
}

int64_t quadratic_band_count_naive(double A, double Y, double Yp) {
  const mpq_class Aq(A), Yq(Y), Ypq(Yp);
  const double reach = std::fabs(A) + std::sqrt(A * A + Y) + 3;
  int64_t count = 0;
  for (auto y = static_cast<int64_t>(std::floor(-reach)); y <= static_cast<int64_t>(std::ceil(reach)); ++y)
    if (band_exact(Aq, Yq, Ypq, y)) ++count;
  return count;
}

}  // namespace quartic
