#pragma once

#include "msn/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace msn {

// normal · x <= bound, or |normal · x| <= bound inside a symmetric polytope.
// As an equality it reads normal · x = bound.
struct Inequality {
  Vec normal;
  Rational bound;
  friend bool operator==(const Inequality&, const Inequality&) = default;
};

struct HRep {
  std::vector<Inequality> inequalities;
  std::vector<Inequality> equalities;
  friend bool operator==(const HRep&, const HRep&) = default;
};

// A bounded polyhedron in Q^dim. When `symmetric` is set the set is centrally
// symmetric: inequalities are read as |a·x| <= b, equalities have bound 0 and
// the vertex list holds one sign-canonical representative per ± pair.
struct Polytope {
  std::size_t dim = 0;
  bool symmetric = false;
  std::optional<HRep> h;
  std::optional<std::vector<Vec>> v;
  friend bool operator==(const Polytope&, const Polytope&) = default;
};

struct ConeGenerators {
  std::vector<Vec> rays;       // primitive integer vectors, lexicographically sorted
  std::vector<Vec> lineality;  // basis of the lineality space
};

// Generators of the cone {x : r · x >= 0 for every row r} by the double
// description method. Extreme rays are returned modulo the lineality space
// (they lie in its orthogonal complement).
ConeGenerators cone_generators(const std::vector<Vec>& rows, std::size_t dim);

// Vertices of {x : a·x <= b}. Throws UnboundedPolyhedron if the set is
// nonempty and unbounded; returns an empty list for the empty set.
std::vector<Vec> polytope_vertices(const std::vector<Inequality>& inequalities, std::size_t dim);

// Sign-canonical vertex representatives of {x : |a·x| <= b}.
std::vector<Vec> symmetric_vertices(const std::vector<Inequality>& inequalities, std::size_t dim);

// Canonical irredundant H-representation of conv(points).
HRep hull_facets(const std::vector<Vec>& points, std::size_t dim);

// Fills in the missing representation. The result always carries the
// canonical irredundant H-rep and the sorted vertex list, so applying the
// conversion twice gives an identical value.
Polytope dd_convert(const Polytope& p);

// Membership test against the H-representation (converted first if absent).
bool contains(const Polytope& p, const Vec& x);

// Scales a·x <= b to the canonical form used in every H-rep.
Inequality canonical_inequality(Inequality ineq, bool symmetric);

}  // namespace msn
