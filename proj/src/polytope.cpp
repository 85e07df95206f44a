#include "quartic/polytope.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace quartic {

namespace {

using Mask = uint64_t;

mpq_class dot(const QVec& a, const QVec& b) {
  mpq_class s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void normalize_ray(QVec& r) {
  mpq_class m = 0;
  for (const auto& x : r) m = std::max(m, mpq_class(abs(x)));
  if (m != 0)
    for (auto& x : r) x /= m;
}

/// Rows a with a·t ≤ b, nonnegativity first.
std::vector<std::pair<QVec, mpq_class>> le_rows(const RationalPolytope& p) {
  std::vector<std::pair<QVec, mpq_class>> rows;
  for (int i = 0; i < p.dim; ++i) {
    QVec a(static_cast<size_t>(p.dim), 0);
    a[static_cast<size_t>(i)] = -1;
    rows.emplace_back(a, 0);
  }
  for (const auto& h : p.halfspaces) {
    if (static_cast<int>(h.coef.size()) != p.dim) throw std::invalid_argument("halfspace dimension mismatch");
    if (h.sense == Sense::le) {
      rows.emplace_back(h.coef, h.bound);
    } else {
      QVec a(h.coef);
      for (auto& x : a) x = -x;
      rows.emplace_back(a, -h.bound);
    }
  }
  if (rows.size() > 63) throw std::invalid_argument("too many halfspaces");
  return rows;
}

int rank(std::vector<QVec> m) {
  if (m.empty()) return 0;
  const size_t cols = m[0].size();
  int r = 0;
  for (size_t c = 0; c < cols && r < static_cast<int>(m.size()); ++c) {
    size_t piv = static_cast<size_t>(r);
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[static_cast<size_t>(r)]);
    for (size_t i = 0; i < m.size(); ++i) {
      if (i == static_cast<size_t>(r) || m[i][c] == 0) continue;
      const mpq_class f = m[i][c] / m[static_cast<size_t>(r)][c];
      for (size_t k = c; k < cols; ++k) m[i][k] -= f * m[static_cast<size_t>(r)][k];
    }
    ++r;
  }
  return r;
}

mpq_class det(std::vector<QVec> m) {
  const size_t n = m.size();
  mpq_class d = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      const mpq_class f = m[i][c] / m[c][c];
      for (size_t k = c; k < n; ++k) m[i][k] -= f * m[c][k];
    }
  }
  return d;
}

int affine_dim(const std::vector<QVec>& verts, const std::vector<int>& idx) {
  std::vector<QVec> diffs;
  for (size_t i = 1; i < idx.size(); ++i) {
    QVec d(verts[static_cast<size_t>(idx[i])]);
    for (size_t k = 0; k < d.size(); ++k) d[k] -= verts[static_cast<size_t>(idx[0])][k];
    diffs.push_back(std::move(d));
  }
  return rank(diffs);
}

struct Triangulator {
  const std::vector<QVec>& verts;
  std::vector<Mask> tight;  // per vertex
  size_t nrows;

  /// Simplices (vertex index lists) triangulating the face spanned by idx, of dimension k.
  std::vector<std::vector<int>> run(const std::vector<int>& idx, int k) const {
    if (k == 0) return {{idx[0]}};
    const int v0 = idx[0];
    std::vector<std::vector<int>> out;
    std::vector<std::vector<int>> seen;
    for (size_t j = 0; j < nrows; ++j) {
      std::vector<int> g;
      for (int v : idx)
        if (tight[static_cast<size_t>(v)] >> j & 1) g.push_back(v);
      if (g.size() == idx.size() || g.empty()) continue;
      if (std::find(g.begin(), g.end(), v0) != g.end()) continue;
      if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
      if (affine_dim(verts, g) != k - 1) continue;
      seen.push_back(g);
      for (auto s : run(g, k - 1)) {
        s.insert(s.begin(), v0);
        out.push_back(std::move(s));
      }
    }
    return out;
  }
};

}  // namespace

std::vector<QVec> polytope_vertices(const RationalPolytope& p) {
  const auto rows = le_rows(p);
  const size_t d = static_cast<size_t>(p.dim), n = d + 1;
  // Homogenized constraints g·(t, λ) ≥ 0: (-a, b).
  std::vector<QVec> G;
  for (const auto& [a, b] : rows) {
    QVec g(n);
    for (size_t i = 0; i < d; ++i) g[i] = -a[i];
    g[d] = b;
    G.push_back(std::move(g));
  }
  QVec lam(n, 0);
  lam[d] = 1;
  // Start from the orthant cut out by t ≥ 0 and λ ≥ 0.
  std::vector<QVec> cons(G.begin(), G.begin() + static_cast<long>(d));
  cons.push_back(lam);
  std::vector<QVec> rays;
  for (size_t i = 0; i < n; ++i) {
    QVec r(n, 0);
    r[i] = 1;
    rays.push_back(std::move(r));
  }
  auto tight_mask = [&](const QVec& r) {
    Mask m = 0;
    for (size_t j = 0; j < cons.size(); ++j)
      if (dot(cons[j], r) == 0) m |= Mask{1} << j;
    return m;
  };
  for (size_t k = d; k < G.size(); ++k) {
    const QVec& g = G[k];
    std::vector<Mask> z;
    for (const auto& r : rays) z.push_back(tight_mask(r));
    std::vector<mpq_class> val;
    for (const auto& r : rays) val.push_back(dot(g, r));
    std::vector<QVec> next;
    for (size_t i = 0; i < rays.size(); ++i)
      if (val[i] >= 0) next.push_back(rays[i]);
    for (size_t i = 0; i < rays.size(); ++i) {
      if (val[i] <= 0) continue;
      for (size_t j = 0; j < rays.size(); ++j) {
        if (val[j] >= 0) continue;
        const Mask common = z[i] & z[j];
        if (static_cast<size_t>(__builtin_popcountll(common)) + 2 < n) continue;
        bool adjacent = true;
        for (size_t l = 0; l < rays.size() && adjacent; ++l)
          if (l != i && l != j && (z[l] & common) == common) adjacent = false;
        if (!adjacent) continue;
        QVec r(n);
        for (size_t c = 0; c < n; ++c) r[c] = val[i] * rays[j][c] - val[j] * rays[i][c];
        normalize_ray(r);
        next.push_back(std::move(r));
      }
    }
    rays = std::move(next);
    cons.push_back(g);
  }
  std::vector<QVec> verts;
  for (const auto& r : rays) {
    if (r[d] == 0) throw std::invalid_argument("polytope is unbounded or empty");
    QVec v(d);
    for (size_t i = 0; i < d; ++i) v[i] = r[i] / r[d];
    verts.push_back(std::move(v));
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  return verts;
}

mpq_class polytope_volume(const RationalPolytope& p) {
  const auto verts = polytope_vertices(p);
  const auto rows = le_rows(p);
  std::vector<int> all(verts.size());
  for (size_t i = 0; i < verts.size(); ++i) all[i] = static_cast<int>(i);
  if (affine_dim(verts, all) < p.dim) return 0;
  Triangulator tri{verts, {}, rows.size()};
  for (const auto& v : verts) {
    Mask m = 0;
    for (size_t j = 0; j < rows.size(); ++j)
      if (dot(rows[j].first, v) == rows[j].second) m |= Mask{1} << j;
    tri.tight.push_back(m);
  }
  mpq_class vol = 0;
  mpz_class fact = 1;
  for (int i = 2; i <= p.dim; ++i) fact *= i;
  for (const auto& s : tri.run(all, p.dim)) {
    std::vector<QVec> m;
    for (size_t i = 1; i < s.size(); ++i) {
      QVec d(verts[static_cast<size_t>(s[i])]);
      for (size_t k = 0; k < d.size(); ++k) d[k] -= verts[static_cast<size_t>(s[0])][k];
      m.push_back(std::move(d));
    }
    vol += abs(det(m));
  }
  vol /= fact;
  vol.canonicalize();
  return vol;
}

bool polytope_contains(const RationalPolytope& p, const std::vector<double>& t) {
  for (double x : t)
    if (x < 0) return false;
  for (const auto& h : p.halfspaces) {
    double s = 0;
    for (size_t i = 0; i < t.size(); ++i) s += h.coef[i].get_d() * t[i];
    if (h.sense == Sense::le ? s > h.bound.get_d() : s < h.bound.get_d()) return false;
  }
  return true;
}

MonteCarlo polytope_volume_mc(const RationalPolytope& p, uint64_t samples, uint64_t seed) {
  const auto verts = polytope_vertices(p);
  const size_t d = static_cast<size_t>(p.dim);
  std::vector<double> lo(d, 1e300), hi(d, -1e300);
  for (const auto& v : verts)
    for (size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], v[i].get_d());
      hi[i] = std::max(hi[i], v[i].get_d());
    }
  double box = 1;
  for (size_t i = 0; i < d; ++i) box *= hi[i] - lo[i];
  // dense copy of the rows for the hot loop
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (const auto& h : p.halfspaces) {
    std::vector<double> a;
    for (const auto& c : h.coef) a.push_back(h.sense == Sense::le ? c.get_d() : -c.get_d());
    A.push_back(std::move(a));
    b.push_back(h.sense == Sense::le ? h.bound.get_d() : -h.bound.get_d());
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> t(d);
  uint64_t hits = 0;
  for (uint64_t s = 0; s < samples; ++s) {
    for (size_t i = 0; i < d; ++i) t[i] = lo[i] + (hi[i] - lo[i]) * U(rng);
    bool in = true;
    for (size_t j = 0; j < A.size() && in; ++j) {
      double v = 0;
      for (size_t i = 0; i < d; ++i) v += A[j][i] * t[i];
      in = v <= b[j];
    }
    hits += in;
  }
  const double f = static_cast<double>(hits) / static_cast<double>(samples);
  return {f * box, box * std::sqrt(f * (1 - f) / static_cast<double>(samples))};
}

RationalPolytope unit_cube(int dim) {
  RationalPolytope p{dim, {}};
  for (int i = 0; i < dim; ++i) {
    QVec a(static_cast<size_t>(dim), 0);
    a[static_cast<size_t>(i)] = 1;
    p.halfspaces.push_back({a, 1, Sense::le});
  }
  return p;
}

RationalPolytope standard_simplex(int dim) {
  return {dim, {{QVec(static_cast<size_t>(dim), 1), 1, Sense::le}}};
}

}  // namespace quartic
