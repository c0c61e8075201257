#include "msn/seminorm.hpp"

#include "msn/error.hpp"
#include "msn/lp.hpp"

#include <algorithm>
#include <mutex>

namespace msn {

struct Seminorm::Geometry {
  std::vector<Vec> kernel;
  std::vector<std::size_t> coords;
  Matrix projection;
  std::vector<Vec> ball;
};

struct Seminorm::Cache {
  std::once_flag once;
  Geometry geo;
};

namespace {

std::vector<Vec> canonical_list(std::size_t dim, std::vector<Vec> fs) {
  std::vector<Vec> out;
  out.reserve(fs.size());
  for (auto& f : fs) {
    if (f.size() != dim) throw Error(ErrorKind::DimensionMismatch, "functional has wrong dimension");
    if (!is_zero(f)) out.push_back(sign_canonical(std::move(f)));
  }
  std::sort(out.begin(), out.end(), LexLess{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Is phi in {sum c_j f_j : sum |c_j| <= 1}?
bool in_symmetric_hull(const Vec& phi, const std::vector<Vec>& others) {
  if (others.empty()) return false;
  const std::size_t k = others.size(), d = phi.size();
  std::vector<LinearConstraint> cons;
  for (std::size_t j = 0; j < 2 * k; ++j) cons.push_back({unit_vector(2 * k, j), Relation::GreaterEq, 0});
  cons.push_back({Vec(2 * k, Rational(1)), Relation::LessEq, 1});
  for (std::size_t r = 0; r < d; ++r) {
    Vec row(2 * k);
    for (std::size_t j = 0; j < k; ++j) {
      row[j] = others[j][r];
      row[k + j] = -others[j][r];
    }
    cons.push_back({std::move(row), Relation::Equal, phi[r]});
  }
  return feasible(2 * k, cons);
}

}  // namespace

Seminorm::Seminorm() : cache_(std::make_shared<Cache>()) {}

Seminorm::Seminorm(std::size_t dim, std::vector<Vec> functionals)
    : dim_(dim), functionals_(std::move(functionals)), cache_(std::make_shared<Cache>()) {}

Seminorm Seminorm::make(std::size_t dim, std::vector<Vec> functionals) {
  std::vector<Vec> fs = canonical_list(dim, std::move(functionals));

  // Among parallel functionals only the longest can be a vertex.
  std::vector<Vec> longest;
  {
    std::vector<std::pair<Vec, std::size_t>> keyed;
    for (std::size_t i = 0; i < fs.size(); ++i) keyed.emplace_back(primitive_direction(fs[i]), i);
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return lex_compare(a.first, b.first) < 0; });
    for (std::size_t i = 0; i < keyed.size();) {
      std::size_t best = keyed[i].second, j = i + 1;
      for (; j < keyed.size() && keyed[j].first == keyed[i].first; ++j)
        if (max_abs(fs[keyed[j].second]) > max_abs(fs[best])) best = keyed[j].second;
      longest.push_back(fs[best]);
      i = j;
    }
    std::sort(longest.begin(), longest.end(), LexLess{});
  }

  std::vector<Vec> kept = longest;
  for (std::size_t i = 0; i < kept.size();) {
    std::vector<Vec> others;
    for (std::size_t j = 0; j < kept.size(); ++j)
      if (j != i) others.push_back(kept[j]);
    if (in_symmetric_hull(kept[i], others))
      kept.erase(kept.begin() + static_cast<long>(i));
    else
      ++i;
  }
  return Seminorm(dim, std::move(kept));
}

Seminorm Seminorm::trusted(std::size_t dim, std::vector<Vec> functionals) {
  return Seminorm(dim, canonical_list(dim, std::move(functionals)));
}

Seminorm Seminorm::zero(std::size_t dim) { return Seminorm(dim, {}); }

Seminorm Seminorm::linf(std::size_t dim) {
  std::vector<Vec> fs;
  for (std::size_t i = 0; i < dim; ++i) fs.push_back(unit_vector(dim, i));
  return trusted(dim, std::move(fs));
}

Rational Seminorm::operator()(const Vec& x) const {
  if (x.size() != dim_) throw Error(ErrorKind::DimensionMismatch, "seminorm evaluated on vector of wrong dimension");
  Rational best(0);
  for (const auto& f : functionals_) {
    Rational v = abs(dot(f, x));
    if (v > best) best = v;
  }
  return best;
}

const Seminorm::Geometry& Seminorm::geometry() const {
  if (!cache_) throw Error(ErrorKind::Format, "uninitialized seminorm");
  std::call_once(cache_->once, [this] {
    Geometry& g = cache_->geo;
    if (functionals_.empty()) {
      for (std::size_t i = 0; i < dim_; ++i) g.kernel.push_back(unit_vector(dim_, i));
      g.projection = Matrix(0, dim_);
      return;
    }
    Matrix f = Matrix::from_rows(functionals_, dim_);
    RowEchelon e = rref(f);
    g.coords = e.pivots;
    const std::size_t r = g.coords.size();
    g.projection = Matrix(r, dim_);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < dim_; ++j) g.projection(i, j) = e.reduced(i, j);
    g.kernel = kernel_basis(f);

    std::vector<Inequality> ineqs;
    for (const auto& phi : functionals_) {
      Vec q(r);
      for (std::size_t i = 0; i < r; ++i) q[i] = phi[g.coords[i]];
      ineqs.push_back({std::move(q), Rational(1)});
    }
    for (const auto& y : symmetric_vertices(ineqs, r)) {
      Vec w = zeros(dim_);
      for (std::size_t i = 0; i < r; ++i) w[g.coords[i]] = y[i];
      g.ball.push_back(sign_canonical(std::move(w)));
    }
    std::sort(g.ball.begin(), g.ball.end(), LexLess{});
  });
  return cache_->geo;
}

const std::vector<Vec>& Seminorm::kernel() const { return geometry().kernel; }
const std::vector<std::size_t>& Seminorm::quotient_coords() const { return geometry().coords; }
const Matrix& Seminorm::projection() const { return geometry().projection; }
const std::vector<Vec>& Seminorm::ball_vertices() const { return geometry().ball; }

Seminorm Seminorm::scaled(const Rational& c) const {
  if (sgn(c) == 0) return zero(dim_);
  std::vector<Vec> fs;
  for (const auto& f : functionals_) fs.push_back(scale(f, abs(c)));
  return trusted(dim_, std::move(fs));
}

QuotientNorm quotient_norm(const Seminorm& s) {
  const auto& coords = s.quotient_coords();
  std::vector<Vec> fs;
  for (const auto& phi : s.functionals()) {
    Vec q(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) q[i] = phi[coords[i]];
    fs.push_back(std::move(q));
  }
  return QuotientNorm{s.projection(), Seminorm::trusted(coords.size(), std::move(fs))};
}

Polytope dual_ball(const Seminorm& s) {
  Polytope p;
  p.dim = s.dim();
  p.symmetric = true;
  p.v = s.is_zero() ? std::vector<Vec>{zeros(s.dim())} : s.functionals();
  return dd_convert(p);
}

Seminorm reduce_functionals(std::size_t dim, std::vector<Vec> functionals) {
  return Seminorm::make(dim, std::move(functionals));
}

Seminorm max_of(const Seminorm& a, const Seminorm& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "max of seminorms on different spaces");
  if (dominated(a, b)) return b;
  if (dominated(b, a)) return a;
  std::vector<Vec> fs = a.functionals();
  fs.insert(fs.end(), b.functionals().begin(), b.functionals().end());
  return Seminorm::make(a.dim(), std::move(fs));
}

Seminorm pullback(const Seminorm& s, const Matrix& m) {
  if (m.rows() != s.dim()) throw Error(ErrorKind::DimensionMismatch, "pullback through matrix of wrong shape");
  std::vector<Vec> fs;
  for (const auto& f : s.functionals()) fs.push_back(m.apply_transpose(f));
  return Seminorm::make(m.cols(), std::move(fs));
}

bool dominated(const Seminorm& a, const Seminorm& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "comparing seminorms on different spaces");
  for (const auto& k : b.kernel())
    if (sgn(a(k)) != 0) return false;
  for (const auto& v : b.ball_vertices())
    if (a(v) > 1) return false;
  return true;
}

Seminorm block_max(const Seminorm& a, const Seminorm& b) {
  const std::size_t n = a.dim() + b.dim();
  std::vector<Vec> fs;
  for (const auto& f : a.functionals()) fs.push_back(concat(f, zeros(b.dim())));
  for (const auto& f : b.functionals()) fs.push_back(concat(zeros(a.dim()), f));
  return Seminorm::trusted(n, std::move(fs));
}

Seminorm block_sum(const Seminorm& a, const Seminorm& b) {
  const std::size_t n = a.dim() + b.dim();
  std::vector<Vec> fs;
  if (a.is_zero() || b.is_zero()) return block_max(a, b);
  for (const auto& f : a.functionals())
    for (const auto& g : b.functionals()) {
      fs.push_back(concat(f, g));
      fs.push_back(concat(f, negate(g)));
    }
  return Seminorm::trusted(n, std::move(fs));
}

Seminorm embed_block(const Seminorm& s, std::size_t total, std::size_t offset) {
  if (offset + s.dim() > total) throw Error(ErrorKind::DimensionMismatch, "block does not fit");
  std::vector<Vec> fs;
  for (const auto& f : s.functionals()) {
    Vec g = zeros(total);
    std::copy(f.begin(), f.end(), g.begin() + static_cast<long>(offset));
    fs.push_back(std::move(g));
  }
  return Seminorm::trusted(total, std::move(fs));
}

}  // namespace msn
