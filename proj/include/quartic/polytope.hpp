#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <vector>

namespace quartic {

using QVec = std::vector<mpq_class>;

enum class Sense { le, ge };

struct Halfspace {
  QVec coef;
  mpq_class bound;
  Sense sense;
};

/// {t ∈ Q^dim : t ≥ 0, every halfspace holds}.
struct RationalPolytope {
  int dim;
  std::vector<Halfspace> halfspaces;
};

/// Vertices by incremental halfspace insertion (double description) on the homogenized cone.
/// Throws std::invalid_argument if the polytope is unbounded.
std::vector<QVec> polytope_vertices(const RationalPolytope& p);

/// Exact volume: fan triangulation from a base vertex over recursively triangulated faces.
mpq_class polytope_volume(const RationalPolytope& p);

bool polytope_contains(const RationalPolytope& p, const std::vector<double>& t);

struct MonteCarlo {
  double estimate;
  double std_error;
};

/// Hit-count estimate in the bounding box of the vertices.
MonteCarlo polytope_volume_mc(const RationalPolytope& p, uint64_t samples, uint64_t seed);

RationalPolytope unit_cube(int dim);
RationalPolytope standard_simplex(int dim);

}  // namespace quartic
