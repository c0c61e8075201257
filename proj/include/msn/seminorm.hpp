#pragma once

#include "msn/matrix.hpp"
#include "msn/polytope.hpp"
#include "msn/rational.hpp"

#include <cstddef>
#include <memory>
#include <vector>

namespace msn {

// A polyhedral seminorm ||x|| = max_i |phi_i(x)| on Q^dim.
//
// The functional list is kept canonical: each functional is sign-canonical and
// nonzero, the list is sorted and no functional lies in the convex hull of
// plus/minus the others. The zero seminorm has an empty list. Two seminorms
// are equal as functions exactly when they compare equal.
class Seminorm {
 public:
  Seminorm();

  // Canonicalizes and removes redundant functionals (LP membership tests).
  static Seminorm make(std::size_t dim, std::vector<Vec> functionals);
  // Skips the redundancy check; the caller guarantees the functionals are the
  // vertices of their symmetric hull.
  static Seminorm trusted(std::size_t dim, std::vector<Vec> functionals);
  static Seminorm zero(std::size_t dim);
  // The coordinate sup-norm.
  static Seminorm linf(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Vec>& functionals() const noexcept { return functionals_; }
  bool is_zero() const noexcept { return functionals_.empty(); }

  Rational operator()(const Vec& x) const;

  // Basis of {x : ||x|| = 0}.
  const std::vector<Vec>& kernel() const;
  // Lexicographically first coordinates whose span complements the kernel.
  const std::vector<std::size_t>& quotient_coords() const;
  // Maps x to its coordinates in the quotient (rank x dim).
  const Matrix& projection() const;
  // Quotient unit-ball vertices lifted into Q^dim (supported on
  // quotient_coords), one representative per ± pair.
  const std::vector<Vec>& ball_vertices() const;

  Seminorm scaled(const Rational& c) const;

  friend bool operator==(const Seminorm& a, const Seminorm& b) {
    return a.dim_ == b.dim_ && a.functionals_ == b.functionals_;
  }

 private:
  struct Geometry;
  struct Cache;
  Seminorm(std::size_t dim, std::vector<Vec> functionals);
  const Geometry& geometry() const;

  std::size_t dim_ = 0;
  std::vector<Vec> functionals_;
  std::shared_ptr<Cache> cache_;
};

struct QuotientNorm {
  Matrix projection;  // quotient coordinates of x
  Seminorm norm;      // a norm on the quotient coordinates
};

QuotientNorm quotient_norm(const Seminorm& s);

// Symmetric polytope conv(± functionals) with both representations.
Polytope dual_ball(const Seminorm& s);

// Same as Seminorm::make; named after the operation it performs.
Seminorm reduce_functionals(std::size_t dim, std::vector<Vec> functionals);

// x -> max(a(x), b(x)).
Seminorm max_of(const Seminorm& a, const Seminorm& b);
// x -> s(m x) for a matrix m with m.rows() == s.dim().
Seminorm pullback(const Seminorm& s, const Matrix& m);
// True iff a(x) <= b(x) for every x.
bool dominated(const Seminorm& a, const Seminorm& b);

// Direct sum seminorms on Q^(a.dim + b.dim).
Seminorm block_max(const Seminorm& a, const Seminorm& b);
Seminorm block_sum(const Seminorm& a, const Seminorm& b);
// Seminorm of the block at `offset` only, extended by zero to `total` coordinates.
Seminorm embed_block(const Seminorm& s, std::size_t total, std::size_t offset);

}  // namespace msn
