#pragma once

#include "msn/rational.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace msn {

enum class Relation { LessEq, GreaterEq, Equal };

// coeffs · x  (rel)  rhs
struct LinearConstraint {
  Vec coeffs;
  Relation rel = Relation::LessEq;
  Rational rhs;
};

struct LPResult {
  Rational value;                   // optimal objective value
  Vec point;                        // a basic optimal solution
  std::vector<std::size_t> active;  // indices of constraints tight at `point`
};

// Minimizes objective · x over free variables x subject to the constraints.
// Two-phase dense simplex with Bland's rule. Throws Error(Infeasible) or
// Error(Unbounded).
LPResult minimize(const Vec& objective, std::span<const LinearConstraint> constraints);
LPResult maximize(const Vec& objective, std::span<const LinearConstraint> constraints);

// Convenience: true iff the system has a solution.
bool feasible(std::size_t num_vars, std::span<const LinearConstraint> constraints);

}  // namespace msn
