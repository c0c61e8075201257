#pragma once

#include "msn/linear_map.hpp"
#include "msn/space.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace msn {

struct AmalgamResult {
  MultiSpace w;
  LinearMap leg_y;  // Y -> W
  LinearMap leg_z;  // Z -> W
  // certificate[n] = distance between leg_y∘f and leg_z∘g at level n, for the
  // levels n shared with the amalgamated space X.
  std::vector<Rational> certificate;
  Rational delta;
  Rational eps;
  Rational bound;  // the guaranteed upper bound for every certificate entry
};

struct PushoutOptions {
  bool graded = false;     // running maxima in the levels beyond X
  bool separated = false;  // append a norm (extend_with_norm) to W
  bool check_inputs = true;
};

// Constant multiplying ||x||_X in the infimum formula after the expansive
// rescaling: (2δ + δ² + ε) / (1 + δ).
Rational pushout_constant(const Rational& delta, const Rational& eps);

// Near-amalgamation pushout of f: X -> Y and g: X -> Z on Y ⊕ Z.
AmalgamResult pushout_nap(const MultiSpace& x, const MultiSpace& y, const MultiSpace& z, const LinearMap& f,
                          const LinearMap& g, const Rational& delta, const Rational& eps,
                          const PushoutOptions& opts = {});

// Level-n seminorm of the pushout evaluated directly from the infimum formula
// by a linear program (independent of the dual-ball construction):
//   inf_x ||y - f x||_Y + ||z + g x||_Z + c ||x||_X.
Rational pushout_primal_value(const LinearMap& f, const LinearMap& g, std::size_t level, const Rational& c,
                              const Vec& y, const Vec& z);

// Level seminorm of the infimal convolution, realized through its dual ball.
Seminorm infimal_pushout_seminorm(const LinearMap& f, const LinearMap& g, std::size_t level, const Rational& c);

// Every functional of X multiplied by 1/(1+δ).
MultiSpace rescale_expansive(const MultiSpace& x, const Rational& delta);

// Amalgamation of maps preserving the first n seminorms; levels m >= n carry
// the sum seminorm. X, Y and Z must have equal lengths.
AmalgamResult pushout_n_embedding(const MultiSpace& x, const MultiSpace& y, const MultiSpace& z,
                                  const LinearMap& f, const LinearMap& g, std::size_t n, const Rational& eps);

// Per-level normed amalgamation assembled as a coordinate product.
AmalgamResult product_amalgam(const MultiSpace& x, const MultiSpace& y, const MultiSpace& z, const LinearMap& f,
                              const LinearMap& g, const Rational& delta, const Rational& eps);

struct AmalgamPair {
  MultiSpace x;
  LinearMap gamma;  // X -> Y
  LinearMap eta;    // X -> Y
  Rational delta;
};

struct MultiAmalgamResult {
  MultiSpace z;
  LinearMap i;                 // Y -> Z
  std::vector<LinearMap> j;    // one per pair, Y -> Z
  std::vector<std::vector<Rational>> certificates;  // per pair, per level of its X
  std::vector<Rational> bounds;                      // per pair: 2δ + ε
};

// Folds pushout_nap over the pairs in order so that each J satisfies
// max_l ||I∘γ - J∘η||_l <= 2δ + ε.
MultiAmalgamResult multi_amalgam(const MultiSpace& y, const std::vector<AmalgamPair>& pairs, const Rational& eps,
                                 const PushoutOptions& opts = {});

}  // namespace msn
