#include "quartic/surfaces.hpp"

#include <numeric>
#include <sstream>

namespace quartic {

std::string to_string(Surface s) { return s == Surface::V1 ? "V1" : "V2"; }

Surface parse_surface(const std::string& name) {
  if (name == "V1" || name == "v1" || name == "1") return Surface::V1;
  if (name == "V2" || name == "v2" || name == "2") return Surface::V2;
  throw std::invalid_argument("unknown surface '" + name + "' (expected V1 or V2)");
}

QuadricPair quadrics(Surface s) {
  auto e = [](int i, int j) {
    std::array<int, 5> v{};
    ++v[i];
    ++v[j];
    return v;
  };
  if (s == Surface::V1)
    return {{{1, e(0, 1)}, {-1, e(2, 2)}}, {{1, e(2, 2)}, {1, e(1, 2)}, {1, e(3, 4)}}};
  return {{{1, e(0, 1)}, {-1, e(2, 3)}}, {{1, e(1, 2)}, {1, e(2, 4)}, {1, e(3, 4)}}};
}

namespace {

std::array<int64_t, 5> unit(int i) {
  std::array<int64_t, 5> v{};
  v[i] = 1;
  return v;
}

std::array<int64_t, 5> sum(int i, int j) {
  auto v = unit(i);
  v[j] += 1;
  return v;
}

i128 eval_form(const std::vector<Monomial>& f, const Point& p) {
  i128 acc = 0;
  for (const auto& m : f) {
    i128 term = m.coef;
    for (int i = 0; i < 5; ++i)
      for (int k = 0; k < m.exp[i]; ++k)
        if (__builtin_mul_overflow(term, static_cast<i128>(p[i]), &term))
          throw OverflowError("128-bit overflow evaluating quadric monomial");
    if (__builtin_add_overflow(acc, term, &acc))
      throw OverflowError("128-bit overflow summing quadric monomials");
  }
  return acc;
}

}  // namespace

std::vector<Line> lines(Surface s) {
  std::vector<Line> out;
  for (int i : {0, 1})
    for (int j : {3, 4}) out.push_back({{unit(i), unit(2), unit(j)}});
  if (s == Surface::V1) {
    for (int j : {3, 4}) out.push_back({{sum(0, 2), sum(1, 2), unit(j)}});
  } else {
    out.push_back({{unit(1), unit(3), unit(4)}});
    out.push_back({{unit(0), unit(3), sum(1, 4)}});
  }
  return out;
}

std::pair<i128, i128> evaluate_quadrics(Surface s, const Point& p) {
  static const QuadricPair q1 = quadrics(Surface::V1), q2 = quadrics(Surface::V2);
  const QuadricPair& q = s == Surface::V1 ? q1 : q2;
  return {eval_form(q.f1, p), eval_form(q.f2, p)};
}

bool on_surface(Surface s, const Point& p) {
  auto [a, b] = evaluate_quadrics(s, p);
  return a == 0 && b == 0;
}

Point normalize(Point p) {
  int64_t g = 0;
  for (auto x : p) g = std::gcd(g, x);
  if (g == 0) throw std::invalid_argument("normalize: all-zero tuple");
  for (auto& x : p) x /= g;
  for (auto x : p) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : p) y = -y;
    break;
  }
  return p;
}

bool is_normalized(const Point& p) {
  int64_t g = 0;
  for (auto x : p) g = std::gcd(g, x);
  if (g != 1) return false;
  for (auto x : p)
    if (x != 0) return x > 0;
  return false;
}

int64_t height(const Point& p) {
  int64_t h = 0;
  for (auto x : p) h = std::max(h, x < 0 ? -x : x);
  return h;
}

bool on_line(const Line& l, const Point& p) {
  for (const auto& f : l.forms) {
    i128 v = 0;
    for (int i = 0; i < 5; ++i) v += static_cast<i128>(f[i]) * p[i];
    if (v != 0) return false;
  }
  return true;
}

bool on_any_line(Surface s, const Point& p) {
  static const auto l1 = lines(Surface::V1), l2 = lines(Surface::V2);
  for (const auto& l : s == Surface::V1 ? l1 : l2)
    if (on_line(l, p)) return true;
  return false;
}

bool in_open_subset(Surface s, const Point& p) {
  if (!on_surface(s, p)) throw std::invalid_argument("in_open_subset: point not on surface");
  for (auto x : p)
    if (x == 0) return false;
  return true;
}

std::string to_string(const Point& p) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < 5; ++i) os << (i ? "," : "") << p[i];
  os << ')';
  return os.str();
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  std::string s;
  while (u) {
    s.push_back(char('0' + int(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

}  // namespace quartic
