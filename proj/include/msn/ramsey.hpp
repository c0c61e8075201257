#pragma once

#include "msn/linear_map.hpp"
#include "msn/space.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace msn {

// A finite subset of Emb(X, Y). When `certified` is set every embedding of X
// into Y lies within `resolution` of some point (max over the levels of X of
// map_distance); otherwise the points are a seeded sample.
struct EmbeddingNet {
  MultiSpace x, y;
  std::vector<LinearMap> points;
  Rational resolution;
  bool certified = false;
};

// dim X = 1: grid points on the faces of {y : ||y||_m = ||e||_{X,m}, m < len X}
// fine enough that the certified resolution is at most `spacing` (at most
// spacing/2 on edges). Otherwise a sample of
// signed coordinate embeddings (no density certificate).
// Throws EmptyEmbeddingSet when no embedding exists.
EmbeddingNet build_net(const MultiSpace& x, const MultiSpace& y, const Rational& spacing, std::uint64_t seed = 0,
                       std::size_t samples = 32);
// dim X = 1 only: every face lattice has step 1/k (k = 2 on polygons gives the
// vertices and edge midpoints).
EmbeddingNet build_net_uniform(const MultiSpace& x, const MultiSpace& y, std::size_t k);

// max over the levels of the common domain of map_distance; throws
// NotAnEmbedding if some level is unbounded.
Rational embedding_distance(const LinearMap& f, const LinearMap& g);

enum class ColouringKind { Discrete, Continuous };

// A colouring of embeddings, given either as a table (points with values)
// or as an evaluator function. Discrete values are colour indices 0..r-1.
struct Colouring {
  ColouringKind kind = ColouringKind::Discrete;
  std::size_t colours = 1;  // discrete: r
  std::size_t level = 1;    // continuous: the n in n-continuous
  std::vector<LinearMap> points;
  std::vector<Rational> values;
  std::function<Rational(const LinearMap&)> evaluator;
  // Discrete colourings obtained by discretizing: colour i stands for palette[i].
  std::vector<Rational> palette;

  // Throws UndefinedPoint when neither the table nor an evaluator covers phi.
  Rational operator()(const LinearMap& phi) const;
};

Colouring table_colouring(ColouringKind kind, std::size_t colours_or_level, std::vector<LinearMap> points,
                          std::vector<Rational> values);
// c(phi) = min(1, max(0, phi(e)[coord])) for one-dimensional domains.
Colouring coordinate_clamp(std::size_t coord, std::size_t level = 1);
// c(phi) = min(1, max_m ||phi - centre||_m).
Colouring distance_to(const LinearMap& centre, std::size_t level);

// Continuous: max - min of the values. Discrete: 0 when one colour class
// eps-covers all points (within the supplied points), 1 otherwise.
Rational oscillation(const Colouring& c, const std::vector<LinearMap>& points, const Rational& eps = 0);

// A pair of points violating |c(x) - c(y)| <= max_{m<n} ||x - y||_m, if any.
std::optional<std::pair<std::size_t, std::size_t>> lipschitz_violation(const Colouring& c,
                                                                       const std::vector<LinearMap>& points);

// Uniform grid D = {0, eps, 2 eps, ..., 1} and the nearest value (ties go down).
std::vector<Rational> uniform_grid(const Rational& eps);
Colouring discretize(const Colouring& c, const Rational& eps);

// c~(phi) = min{1, min over table points psi of colour r of max_m ||phi - psi||_m},
// with r the last colour. Continuous of level len X.
Colouring bad_colouring_from_discrete(const Colouring& c);

// Induced colouring on tuples (gamma_j) of level-j embeddings X_j -> Z_j,
// c^(gamma) = c(F(gamma)) with F(gamma)(x) = (gamma_1 x, ..., gamma_n x).
struct ProductColouring {
  MultiSpace x;                 // n seminorms
  std::vector<MultiSpace> zs;   // single-seminorm factors
  MultiSpace z;                 // coordinate product of zs
  Colouring base;               // on Emb(X, Z)
  // Throws ShapeMismatch for a wrong tuple and NotAnEmbedding when some
  // gamma_j is not isometric at level j.
  LinearMap assemble(const std::vector<LinearMap>& gammas) const;
  Rational operator()(const std::vector<LinearMap>& gammas) const;
  // X with only its j-th seminorm.
  MultiSpace level_space(std::size_t j) const;
};

ProductColouring product_colouring(const Colouring& c, const MultiSpace& x, const std::vector<MultiSpace>& zs);

// Base case of the product construction for a single-seminorm X.
struct QuotientLift {
  MultiSpace x, x_tilde;
  Matrix pi_x;       // X -> X~
  Matrix section;    // X~ -> X with pi_x * section = id
  MultiSpace z, padded;  // padded = Z x Z with ||(z1, z2)|| = ||z1||
  Colouring base;    // on Emb(X, padded)
  Colouring lifted;  // on Emb(X~, Z): c~(gamma) = c(pad(gamma) ∘ pi_X)
  LinearMap pad(const LinearMap& gamma) const;  // gamma-bar(v) = (gamma v, 0)
};

// Throws MultiLevelInput unless X and Z carry a single seminorm.
QuotientLift quotient_lift(const Colouring& c, const MultiSpace& x, const MultiSpace& z);

// Both sides of the distance transfer for rho: Y~ -> Z, theta: X~ -> Z and
// eta: X -> Y: lhs = ||(rho-bar ∘ pi_Y) ∘ eta - theta-bar ∘ pi_X||,
// rhs = ||rho ∘ phi - theta|| with phi ∘ pi_X = pi_Y ∘ eta.
struct TransferCheck {
  Rational lhs, rhs;
  bool holds() const { return lhs <= rhs; }
};
TransferCheck distance_transfer(const QuotientLift& lift, const MultiSpace& y, const LinearMap& rho,
                                const LinearMap& theta, const LinearMap& eta);

// near[k][e][p]: candidate k composed with netXY point e lies within eps of
// netXZ point p.
struct CoverageTable {
  std::vector<std::vector<std::vector<bool>>> near;
};
CoverageTable coverage_table(const EmbeddingNet& net_xz, const EmbeddingNet& net_xy,
                             const std::vector<LinearMap>& candidates, const Rational& eps);

struct MonochromaticWitness {
  std::size_t candidate = 0;
  std::size_t colour = 0;
};

// colours[p] is the colour of netXZ point p.
std::optional<MonochromaticWitness> search_monochromatic(const std::vector<std::size_t>& colours,
                                                         std::size_t r, const CoverageTable& table);
std::optional<MonochromaticWitness> search_monochromatic(const Colouring& c, const EmbeddingNet& net_xz,
                                                         const EmbeddingNet& net_xy,
                                                         const std::vector<LinearMap>& candidates,
                                                         const Rational& eps);

nlohmann::json to_json(const EmbeddingNet& net);
EmbeddingNet net_from_json(const nlohmann::json& j);
// Table colourings keyed by net-point index.
nlohmann::json colouring_to_json(const Colouring& c, const EmbeddingNet& net);
Colouring colouring_from_json(const nlohmann::json& j, const EmbeddingNet& net);

}  // namespace msn
