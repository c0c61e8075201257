#include "msn/polytope.hpp"

#include "msn/error.hpp"
#include "msn/matrix.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

namespace msn {

namespace {

using IVec = std::vector<Integer>;

class Bits {
 public:
  explicit Bits(std::size_t n = 0) : w_((n + 63) / 64, 0) {}
  void set(std::size_t i) { w_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1U; }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto x : w_) c += static_cast<std::size_t>(std::popcount(x));
    return c;
  }
  bool subset_of(const Bits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  friend Bits operator&(const Bits& a, const Bits& b) {
    Bits r = a;
    for (std::size_t i = 0; i < r.w_.size(); ++i) r.w_[i] &= b.w_[i];
    return r;
  }

 private:
  std::vector<std::uint64_t> w_;
};

IVec to_ivec(const Vec& v) {
  Vec p = primitive_direction(v);
  IVec r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i].get_num();
  return r;
}

Vec to_vec(const IVec& v) {
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i];
  return r;
}

Integer idot(const IVec& a, const IVec& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

void make_primitive(IVec& v) {
  Integer g = 0;
  for (const auto& x : v)
    if (sgn(x) != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1)
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

struct Ray {
  IVec x;
  Bits zero;
};

// Extreme rays of the pointed cone {y : A y >= 0} with rank A = k.
std::vector<IVec> pointed_rays(const std::vector<IVec>& rows, std::size_t k) {
  if (k == 0) return {};
  const std::size_t m = rows.size();

  Matrix at(k, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) at(j, i) = rows[i][j];
  std::vector<std::size_t> start = independent_columns(at);

  Matrix as(k, k);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c) as(r, c) = rows[start[r]][c];
  Matrix inv = inverse(as);

  std::vector<bool> done(m, false);
  for (auto i : start) done[i] = true;

  std::vector<Ray> rays;
  for (std::size_t c = 0; c < k; ++c) {
    Ray ray{to_ivec(inv.column(c)), Bits(m)};
    for (auto i : start)
      if (sgn(idot(rows[i], ray.x)) == 0) ray.zero.set(i);
    rays.push_back(std::move(ray));
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (done[i]) continue;
    done[i] = true;
    std::vector<Integer> val(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      val[r] = idot(rows[i], rays[r].x);
      int s = sgn(val[r]);
      if (s > 0) pos.push_back(r);
      if (s < 0) neg.push_back(r);
    }
    if (neg.empty()) {
      for (std::size_t r = 0; r < rays.size(); ++r)
        if (sgn(val[r]) == 0) rays[r].zero.set(i);
      continue;
    }
    std::vector<Ray> next;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (sgn(val[r]) < 0) continue;
      Ray kept = rays[r];
      if (sgn(val[r]) == 0) kept.zero.set(i);
      next.push_back(std::move(kept));
    }
    for (auto p : pos) {
      for (auto q : neg) {
        Bits common = rays[p].zero & rays[q].zero;
        if (common.count() + 2 < k) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          if (common.subset_of(rays[r].zero)) adjacent = false;
        }
        if (!adjacent) continue;
        Ray fresh{IVec(rays[p].x.size()), common};
        for (std::size_t j = 0; j < fresh.x.size(); ++j) fresh.x[j] = val[p] * rays[q].x[j] - val[q] * rays[p].x[j];
        make_primitive(fresh.x);
        fresh.zero.set(i);
        next.push_back(std::move(fresh));
      }
    }
    rays = std::move(next);
  }

  std::vector<IVec> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.x));
  return out;
}

void sort_unique(std::vector<Vec>& vs) {
  std::sort(vs.begin(), vs.end(), LexLess{});
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

bool ineq_less(const Inequality& a, const Inequality& b) {
  auto c = lex_compare(a.normal, b.normal);
  if (c != 0) return c < 0;
  return a.bound < b.bound;
}

void sort_unique(std::vector<Inequality>& vs) {
  std::sort(vs.begin(), vs.end(), ineq_less);
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
}

std::vector<Inequality> with_equalities(const HRep& h, bool symmetric) {
  std::vector<Inequality> all = h.inequalities;
  for (const auto& e : h.equalities) {
    all.push_back(e);
    if (!symmetric) all.push_back({negate(e.normal), -e.bound});
  }
  return all;
}

bool satisfies(const HRep& h, const Vec& x, bool symmetric) {
  for (const auto& e : h.equalities)
    if (dot(e.normal, x) != e.bound) return false;
  for (const auto& q : h.inequalities) {
    Rational val = dot(q.normal, x);
    if (symmetric) val = abs(val);
    if (val > q.bound) return false;
  }
  return true;
}

// Drops points that are not vertices of the polytope described by h.
std::vector<Vec> extreme_points(const std::vector<Vec>& pts, const HRep& h, std::size_t dim, bool symmetric) {
  std::vector<Vec> out;
  for (const auto& p : pts) {
    std::vector<Vec> tight;
    for (const auto& e : h.equalities) tight.push_back(e.normal);
    for (const auto& q : h.inequalities) {
      Rational val = dot(q.normal, p);
      if (symmetric) val = abs(val);
      if (val == q.bound) tight.push_back(q.normal);
    }
    if (!tight.empty() && rank(Matrix::from_rows(tight, dim)) == dim) out.push_back(p);
    if (tight.empty() && dim == 0) out.push_back(p);
  }
  return out;
}

}  // namespace

Inequality canonical_inequality(Inequality ineq, bool symmetric) {
  Rational s;
  if (sgn(ineq.bound) != 0) {
    s = abs(ineq.bound);
  } else {
    for (const auto& q : ineq.normal)
      if (sgn(q) != 0) {
        s = abs(q);
        break;
      }
    if (sgn(s) == 0) return ineq;
  }
  ineq.normal = scale(ineq.normal, 1 / s);
  ineq.bound /= s;
  if (symmetric) {
    ineq.normal = sign_canonical(std::move(ineq.normal));
    ineq.bound = abs(ineq.bound);
  }
  return ineq;
}

ConeGenerators cone_generators(const std::vector<Vec>& rows, std::size_t dim) {
  std::vector<Vec> clean;
  for (const auto& r : rows) {
    if (r.size() != dim) throw Error(ErrorKind::DimensionMismatch, "cone row has wrong dimension");
    if (!is_zero(r)) clean.push_back(primitive_direction(r));
  }
  sort_unique(clean);

  ConeGenerators out;
  if (clean.empty()) {
    for (std::size_t i = 0; i < dim; ++i) out.lineality.push_back(unit_vector(dim, i));
    return out;
  }
  Matrix a = Matrix::from_rows(clean, dim);
  out.lineality = kernel_basis(a);

  std::vector<IVec> irows;
  std::vector<Vec> basis;
  std::size_t k = dim;
  if (out.lineality.empty()) {
    for (const auto& r : clean) irows.push_back(to_ivec(r));
  } else {
    basis = row_space_basis(a);
    k = basis.size();
    for (const auto& r : clean) {
      Vec red(k);
      for (std::size_t j = 0; j < k; ++j) red[j] = dot(r, basis[j]);
      irows.push_back(to_ivec(red));
    }
  }

  for (const auto& y : pointed_rays(irows, k)) {
    if (basis.empty()) {
      out.rays.push_back(to_vec(y));
    } else {
      Vec x = zeros(dim);
      for (std::size_t j = 0; j < k; ++j)
        if (sgn(y[j]) != 0) x = add(x, scale(basis[j], Rational(y[j])));
      out.rays.push_back(primitive_direction(x));
    }
  }
  sort_unique(out.rays);
  return out;
}

std::vector<Vec> polytope_vertices(const std::vector<Inequality>& inequalities, std::size_t dim) {
  std::vector<Vec> rows;
  for (const auto& q : inequalities) {
    if (q.normal.size() != dim) throw Error(ErrorKind::DimensionMismatch, "inequality has wrong dimension");
    Vec r(dim + 1);
    r[0] = q.bound;
    for (std::size_t j = 0; j < dim; ++j) r[j + 1] = -q.normal[j];
    rows.push_back(std::move(r));
  }
  rows.push_back(unit_vector(dim + 1, 0));
  ConeGenerators g = cone_generators(rows, dim + 1);

  bool has_point = false, has_direction = !g.lineality.empty();
  std::vector<Vec> verts;
  for (const auto& r : g.rays) {
    if (sgn(r[0]) > 0) {
      has_point = true;
      Vec x(r.begin() + 1, r.end());
      verts.push_back(scale(x, 1 / r[0]));
    } else {
      has_direction = true;
    }
  }
  if (!has_point) return {};
  if (has_direction) throw Error(ErrorKind::UnboundedPolyhedron, "polyhedron is unbounded");
  sort_unique(verts);
  return verts;
}

std::vector<Vec> symmetric_vertices(const std::vector<Inequality>& inequalities, std::size_t dim) {
  std::vector<Inequality> both;
  both.reserve(2 * inequalities.size());
  for (const auto& q : inequalities) {
    both.push_back(q);
    both.push_back({negate(q.normal), q.bound});
  }
  std::vector<Vec> verts;
  for (auto& v : polytope_vertices(both, dim)) verts.push_back(sign_canonical(std::move(v)));
  sort_unique(verts);
  return verts;
}

HRep hull_facets(const std::vector<Vec>& points, std::size_t dim) {
  HRep h;
  if (points.empty()) return h;
  std::vector<Vec> rows;
  for (const auto& p : points) {
    if (p.size() != dim) throw Error(ErrorKind::DimensionMismatch, "point has wrong dimension");
    Vec r(dim + 1);
    r[0] = 1;
    for (std::size_t j = 0; j < dim; ++j) r[j + 1] = -p[j];
    rows.push_back(std::move(r));
  }
  ConeGenerators g = cone_generators(rows, dim + 1);

  if (!g.lineality.empty()) {
    // Rows laid out as [a | b] so that the reduced echelon form pivots on a first.
    std::vector<Vec> eq;
    for (const auto& l : g.lineality) {
      Vec r(l.begin() + 1, l.end());
      r.push_back(l[0]);
      eq.push_back(std::move(r));
    }
    for (const auto& r : row_space_basis(Matrix::from_rows(eq, dim + 1)))
      h.equalities.push_back({Vec(r.begin(), r.end() - 1), r.back()});
  }
  for (const auto& r : g.rays) {
    Inequality q{Vec(r.begin() + 1, r.end()), r[0]};
    bool tight = std::any_of(points.begin(), points.end(), [&](const Vec& p) { return dot(q.normal, p) == q.bound; });
    if (tight) h.inequalities.push_back(canonical_inequality(std::move(q), false));
  }
  sort_unique(h.inequalities);
  return h;
}

Polytope dd_convert(const Polytope& p) {
  Polytope out;
  out.dim = p.dim;
  out.symmetric = p.symmetric;

  std::vector<Vec> pts;
  if (p.v) {
    for (const auto& x : *p.v) {
      if (x.size() != p.dim) throw Error(ErrorKind::DimensionMismatch, "vertex has wrong dimension");
      pts.push_back(p.symmetric ? sign_canonical(x) : x);
    }
  } else if (p.h) {
    auto all = with_equalities(*p.h, p.symmetric);
    pts = p.symmetric ? symmetric_vertices(all, p.dim) : polytope_vertices(all, p.dim);
    if (pts.empty()) {
      HRep h;
      for (const auto& q : p.h->inequalities) h.inequalities.push_back(canonical_inequality(q, p.symmetric));
      for (const auto& q : p.h->equalities) h.equalities.push_back(canonical_inequality(q, p.symmetric));
      sort_unique(h.inequalities);
      sort_unique(h.equalities);
      out.h = std::move(h);
      out.v = std::vector<Vec>{};
      return out;
    }
  } else {
    throw Error(ErrorKind::Format, "polytope carries no representation");
  }
  sort_unique(pts);

  std::vector<Vec> full = pts;
  if (p.symmetric)
    for (const auto& x : pts) full.push_back(negate(x));
  HRep h = hull_facets(full, p.dim);
  if (p.symmetric) {
    for (auto& q : h.inequalities) q = canonical_inequality(std::move(q), true);
    sort_unique(h.inequalities);
  }
  out.v = extreme_points(pts, h, p.dim, p.symmetric);
  out.h = std::move(h);
  return out;
}

bool contains(const Polytope& p, const Vec& x) {
  if (x.size() != p.dim) throw Error(ErrorKind::DimensionMismatch, "point has wrong dimension");
  if (!p.h) return contains(dd_convert(p), x);
  return satisfies(*p.h, x, p.symmetric);
}

}  // namespace msn
