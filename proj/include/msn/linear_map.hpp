#pragma once

#include "msn/matrix.hpp"
#include "msn/space.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace msn {

// A linear map between multi-seminormed spaces; column-vector convention,
// so matrix().rows() == codomain().dim().
class LinearMap {
 public:
  LinearMap() = default;
  LinearMap(MultiSpace domain, MultiSpace codomain, Matrix matrix);

  static LinearMap identity(const MultiSpace& x);

  const MultiSpace& domain() const noexcept { return domain_; }
  const MultiSpace& codomain() const noexcept { return codomain_; }
  const Matrix& matrix() const noexcept { return matrix_; }

  Vec operator()(const Vec& x) const { return matrix_.apply(x); }

  // Same matrix between different spaces of matching dimensions.
  LinearMap retarget(const MultiSpace& domain, const MultiSpace& codomain) const;

  friend bool operator==(const LinearMap&, const LinearMap&) = default;

 private:
  MultiSpace domain_;
  MultiSpace codomain_;
  Matrix matrix_;
};

// g ∘ f; throws ShapeMismatch unless f's codomain dimension matches g's domain.
LinearMap compose(const LinearMap& g, const LinearMap& f);
// f - g on a common domain/codomain shape.
LinearMap difference(const LinearMap& f, const LinearMap& g);

bool is_injective(const LinearMap& f);

// Operator seminorm at one level. `value` is empty when the map sends a vector
// of the domain kernel outside the codomain kernel (unbounded); `witness`
// is then that kernel vector, otherwise the ball vertex attaining the value.
struct OperatorNorm {
  std::optional<Rational> value;
  Vec witness;
};

OperatorNorm operator_seminorm(const LinearMap& f, std::size_t m);

// sup over the domain levels; empty when any level is unbounded.
std::optional<Rational> multi_bounded_norm(const LinearMap& f);

struct LevelDistortion {
  std::optional<Rational> upper;  // empty: unbounded
  std::optional<Rational> lower;  // empty: zero domain seminorm (no constraint)
  Vec upper_witness;
  Vec lower_witness;
};

struct DistortionReport {
  std::vector<LevelDistortion> levels;
  std::optional<Rational> minimal_delta;  // empty: infinite
  bool injective = false;
};

// Throws LengthMismatch if the domain is longer than the codomain.
DistortionReport distortion(const LinearMap& f);

enum class EmbeddingFailure { None, Length, Injectivity, Kernel, Upper, Lower };
std::string_view name(EmbeddingFailure kind);

struct EmbeddingCheck {
  bool ok = false;
  EmbeddingFailure kind = EmbeddingFailure::None;
  std::size_t level = 0;
  Vec witness;
  Rational value;  // observed ratio ||f(x)|| / ||x|| at the witness
};

EmbeddingCheck is_embedding(const LinearMap& f, const Rational& delta);

// Convenience used by constructions: throws NotAnEmbedding with the witness.
void require_embedding(const LinearMap& f, const Rational& delta, const std::string& what);

// Operator seminorm of f - g at level m; throws ShapeMismatch for
// incompatible maps.
OperatorNorm map_distance(const LinearMap& f, const LinearMap& g, std::size_t m);

// Inclusion-style search: an invertible h with h(ker X_k) ⊆ ker Y_k for all k.
struct IsoResult {
  std::optional<LinearMap> iso;
  std::string reason;  // set when no iso is returned
  std::optional<Rational> forward_norm, inverse_norm;
};

IsoResult build_iso_from_invariant(const MultiSpace& x, const MultiSpace& y, std::uint64_t seed = 0);

// Upper bound ||h||_mb * ||h^-1||_mb from the constructed iso; empty = infinite.
std::optional<Rational> bm_upper_bound(const MultiSpace& x, const MultiSpace& y, std::uint64_t seed = 0);

}  // namespace msn
