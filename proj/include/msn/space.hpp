#pragma once

#include "msn/seminorm.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace msn {

// A finite-dimensional space with a finite sequence of polyhedral seminorms.
// Copies share the immutable payload.
class MultiSpace {
 public:
  MultiSpace();
  // Validates lengths and, when `graded` is set, that the sequence is
  // pointwise non-decreasing (throws NotGraded with a witness otherwise).
  MultiSpace(std::size_t dim, std::vector<Seminorm> seminorms, bool graded = false);

  // The trivial space {0} with a single (zero) seminorm.
  static MultiSpace trivial();
  // Q^dim with `length` copies of the sup-norm.
  static MultiSpace linf(std::size_t dim, std::size_t length = 1);

  std::size_t dim() const noexcept { return data_->dim; }
  std::size_t length() const noexcept { return data_->seminorms.size(); }
  bool graded() const noexcept { return data_->graded; }
  const std::vector<Seminorm>& seminorms() const noexcept { return data_->seminorms; }
  const Seminorm& seminorm(std::size_t n) const;

  friend bool operator==(const MultiSpace& a, const MultiSpace& b);

 private:
  struct Data {
    std::size_t dim = 0;
    std::vector<Seminorm> seminorms;
    bool graded = false;
  };
  std::shared_ptr<const Data> data_;
};

// A level n and a vector x with ||x||_n > ||x||_{n+1}, if any.
struct GradedViolation {
  std::size_t level;
  Vec witness;
};
std::optional<GradedViolation> graded_violation(const std::vector<Seminorm>& seq);
bool is_graded_sequence(const std::vector<Seminorm>& seq);

// alpha[s] = dim of the intersection of the kernels indexed by the bit set s;
// alpha[0] = dim X.
struct KernelInvariant {
  std::size_t length = 0;
  std::vector<std::size_t> alpha;
  friend bool operator==(const KernelInvariant&, const KernelInvariant&) = default;
};

// Key format "", "0", "1", "0,1", ...
std::string subset_key(std::size_t mask);

KernelInvariant invariant_alpha(const MultiSpace& x);
// Basis of the intersection of the kernels of the seminorms in `mask`.
std::vector<Vec> kernel_intersection(const MultiSpace& x, std::size_t mask);
bool is_separated(const MultiSpace& x);

MultiSpace extend_with_norm(const MultiSpace& x);
// Throws BadLength unless 1 <= k <= length.
MultiSpace truncate(const MultiSpace& x, std::size_t k);
MultiSpace graded_closure(const MultiSpace& x);

enum class ProductMode { Coordinate, GradedMax };

// Direct sum of the factors. In coordinate mode seminorm i is the designated
// (last) seminorm of factor i on block i; in graded-max mode it is the running
// maximum of those block seminorms. A single factor is returned unchanged.
MultiSpace product_space(const std::vector<MultiSpace>& factors, ProductMode mode);

// Quotient of x by the intersection of all kernels: `projection` maps x onto
// the coordinates of `space`, which is separated and has the same length.
struct SeparatedQuotient {
  MultiSpace space;
  Matrix projection;
};
SeparatedQuotient separated_quotient(const MultiSpace& x);

// Every seminorm of x multiplied by c > 0.
MultiSpace scale_space(const MultiSpace& x, const Rational& c);

}  // namespace msn
