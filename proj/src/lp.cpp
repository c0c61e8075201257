#include "msn/lp.hpp"

#include "msn/error.hpp"

#include <optional>

namespace msn {

namespace {

// Dense tableau in canonical form with respect to `basis`.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_(rows * (cols + 1)), obj_(cols + 1), basis_(rows) {}

  Rational& at(std::size_t r, std::size_t c) { return t_[r * (n_ + 1) + c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return t_[r * (n_ + 1) + c]; }
  Rational& rhs(std::size_t r) { return at(r, n_); }
  const Rational& rhs(std::size_t r) const { return at(r, n_); }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void set_objective(const std::vector<Rational>& cost) {
    for (std::size_t j = 0; j <= n_; ++j) obj_[j] = j < n_ ? cost[j] : Rational(0);
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational& cb = cost[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= n_; ++j)
        if (sgn(at(i, j)) != 0) obj_[j] -= cb * at(i, j);
    }
  }

  // Objective value of the current basic solution.
  Rational value() const { return -obj_[n_]; }

  void pivot(std::size_t p, std::size_t q) {
    Rational piv = at(p, q);
    for (std::size_t j = 0; j <= n_; ++j)
      if (sgn(at(p, j)) != 0) at(p, j) /= piv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == p || sgn(at(i, q)) == 0) continue;
      Rational f = at(i, q);
      for (std::size_t j = 0; j <= n_; ++j)
        if (sgn(at(p, j)) != 0) at(i, j) -= f * at(p, j);
    }
    if (sgn(obj_[q]) != 0) {
      Rational f = obj_[q];
      for (std::size_t j = 0; j <= n_; ++j)
        if (sgn(at(p, j)) != 0) obj_[j] -= f * at(p, j);
    }
    basis_[p] = q;
  }

  // Runs Bland's rule over columns [0, allowed). Returns false when unbounded.
  bool optimize(std::size_t allowed) {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < allowed; ++j)
        if (sgn(obj_[j]) < 0) {
          enter = j;
          break;
        }
      if (!enter) return true;
      std::size_t q = *enter;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (sgn(at(i, q)) <= 0) continue;
        Rational ratio = rhs(i) / at(i, q);
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, q);
    }
  }

  void drop_row(std::size_t r) {
    t_.erase(t_.begin() + static_cast<long>(r * (n_ + 1)), t_.begin() + static_cast<long>((r + 1) * (n_ + 1)));
    basis_.erase(basis_.begin() + static_cast<long>(r));
    --m_;
  }

 private:
  std::size_t m_, n_;
  std::vector<Rational> t_;
  std::vector<Rational> obj_;
  std::vector<std::size_t> basis_;
};

LPResult solve(const Vec& objective, std::span<const LinearConstraint> cons, bool maximize_it) {
  const std::size_t n = objective.size();
  for (const auto& c : cons)
    if (c.coeffs.size() != n) throw Error(ErrorKind::DimensionMismatch, "LP constraint has wrong arity");

  const std::size_t m = cons.size();
  std::size_t slacks = 0;
  for (const auto& c : cons)
    if (c.rel != Relation::Equal) ++slacks;

  const std::size_t art_start = 2 * n + slacks;
  const std::size_t cols = art_start + m;
  Tableau tab(m, cols);

  std::size_t slack_col = 2 * n;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = cons[i];
    int flip = sgn(c.rhs) < 0 ? -1 : 1;
    for (std::size_t k = 0; k < n; ++k) {
      if (sgn(c.coeffs[k]) == 0) continue;
      tab.at(i, k) = flip * c.coeffs[k];
      tab.at(i, n + k) = -flip * c.coeffs[k];
    }
    tab.rhs(i) = flip * c.rhs;
    std::optional<std::size_t> unit_slack;
    if (c.rel != Relation::Equal) {
      int s = (c.rel == Relation::LessEq ? 1 : -1) * flip;
      tab.at(i, slack_col) = s;
      if (s > 0) unit_slack = slack_col;
      ++slack_col;
    }
    if (unit_slack) {
      tab.basis()[i] = *unit_slack;
    } else {
      tab.at(i, art_start + i) = 1;
      tab.basis()[i] = art_start + i;
    }
  }

  // Phase 1: minimize the sum of artificial variables.
  std::vector<Rational> cost(cols, Rational(0));
  bool any_art = false;
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis()[i] >= art_start) {
      cost[art_start + i] = 1;
      any_art = true;
    }
  if (any_art) {
    tab.set_objective(cost);
    tab.optimize(cols);
    if (sgn(tab.value()) > 0) throw Error(ErrorKind::Infeasible, "LP is infeasible");
    for (std::size_t i = 0; i < tab.rows();) {
      if (tab.basis()[i] < art_start) {
        ++i;
        continue;
      }
      std::optional<std::size_t> q;
      for (std::size_t j = 0; j < art_start; ++j)
        if (sgn(tab.at(i, j)) != 0) {
          q = j;
          break;
        }
      if (q) {
        tab.pivot(i, *q);
        ++i;
      } else {
        tab.drop_row(i);
      }
    }
  }

  // Phase 2 over the structural and slack columns only.
  std::fill(cost.begin(), cost.end(), Rational(0));
  for (std::size_t k = 0; k < n; ++k) {
    Rational ck = maximize_it ? Rational(-objective[k]) : objective[k];
    cost[k] = ck;
    cost[n + k] = -ck;
  }
  tab.set_objective(cost);
  if (!tab.optimize(art_start)) throw Error(ErrorKind::Unbounded, "LP is unbounded");

  LPResult res;
  res.point = zeros(n);
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    std::size_t b = tab.basis()[i];
    if (b < n)
      res.point[b] += tab.rhs(i);
    else if (b < 2 * n)
      res.point[b - n] -= tab.rhs(i);
  }
  res.value = dot(objective, res.point);
  for (std::size_t i = 0; i < m; ++i)
    if (dot(cons[i].coeffs, res.point) == cons[i].rhs) res.active.push_back(i);
  return res;
}

}  // namespace

LPResult minimize(const Vec& objective, std::span<const LinearConstraint> constraints) {
  return solve(objective, constraints, false);
}

LPResult maximize(const Vec& objective, std::span<const LinearConstraint> constraints) {
  return solve(objective, constraints, true);
}

bool feasible(std::size_t num_vars, std::span<const LinearConstraint> constraints) {
  try {
    solve(zeros(num_vars), constraints, false);
    return true;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Infeasible) return false;
    throw;
  }
}

}  // namespace msn
