#include "msn/amalgam.hpp"

#include "msn/error.hpp"
#include "msn/lp.hpp"
#include "msn/parallel.hpp"

#include <algorithm>

namespace msn {

namespace {

void require_positive_eps(const Rational& eps) {
  if (sgn(eps) <= 0) throw Error(ErrorKind::EpsNonPositive, "eps must be strictly positive, got " + to_string(eps));
}

void require_span(const MultiSpace& x, const MultiSpace& y, const MultiSpace& z, const LinearMap& f,
                  const LinearMap& g) {
  if (f.domain().dim() != x.dim() || g.domain().dim() != x.dim() || f.codomain().dim() != y.dim() ||
      g.codomain().dim() != z.dim())
    throw Error(ErrorKind::ShapeMismatch, "maps do not form a span X -> Y, X -> Z");
}

// Rows w with |w · (phi, psi)| <= bound describing the dual ball of s placed in
// the block at `offset`; the kernel of s becomes equalities.
void add_dual_ball(const Seminorm& s, std::size_t total, std::size_t offset, std::vector<Inequality>& ineqs,
                   std::vector<Vec>& equalities) {
  auto lift = [&](const Vec& v) {
    Vec w = zeros(total);
    std::copy(v.begin(), v.end(), w.begin() + static_cast<long>(offset));
    return w;
  };
  for (const auto& k : s.kernel()) equalities.push_back(lift(k));
  for (const auto& v : s.ball_vertices()) ineqs.push_back({lift(v), Rational(1)});
}

}  // namespace

Rational pushout_constant(const Rational& delta, const Rational& eps) {
  Rational c = (2 * delta + delta * delta + eps) / (1 + delta);
  c.canonicalize();
  return c;
}

MultiSpace rescale_expansive(const MultiSpace& x, const Rational& delta) {
  if (sgn(delta) < 0) throw Error(ErrorKind::Format, "delta must be non-negative");
  if (sgn(delta) == 0) return x;
  Rational s = 1 / (1 + delta);
  s.canonicalize();
  return scale_space(x, s);
}

Seminorm infimal_pushout_seminorm(const LinearMap& f, const LinearMap& g, std::size_t level, const Rational& c) {
  const Seminorm& sx = f.domain().seminorm(level);
  const Seminorm& sy = f.codomain().seminorm(level);
  const Seminorm& sz = g.codomain().seminorm(level);
  const std::size_t dy = sy.dim();
  const std::size_t dz = sz.dim();
  const std::size_t total = dy + dz;

  std::vector<Inequality> ineqs;
  std::vector<Vec> equalities;
  add_dual_ball(sy, total, 0, ineqs, equalities);
  add_dual_ball(sz, total, dy, ineqs, equalities);
  // chi = f* phi - g* psi must lie in c times the dual ball of X.
  auto chi_row = [&](const Vec& v) { return concat(f(v), negate(g(v))); };
  for (const auto& k : sx.kernel()) equalities.push_back(chi_row(k));
  for (const auto& v : sx.ball_vertices()) ineqs.push_back({chi_row(v), c});

  // Parametrize the equality subspace E = {w : e · w = 0} by a basis B.
  std::vector<Vec> basis = annihilator(equalities, total);
  if (basis.empty()) return Seminorm::zero(total);
  const std::size_t r = basis.size();
  Matrix b = Matrix::from_columns(basis, total);
  std::vector<Inequality> reduced;
  reduced.reserve(ineqs.size());
  for (const auto& in : ineqs) {
    Vec normal = b.apply_transpose(in.normal);
    if (is_zero(normal)) continue;
    reduced.push_back({std::move(normal), in.bound});
  }
  std::vector<Vec> verts = symmetric_vertices(reduced, r);
  std::vector<Vec> functionals;
  functionals.reserve(verts.size());
  for (const auto& t : verts) functionals.push_back(b.apply(t));
  return Seminorm::trusted(total, std::move(functionals));
}

Rational pushout_primal_value(const LinearMap& f, const LinearMap& g, std::size_t level, const Rational& c,
                              const Vec& y, const Vec& z) {
  const Seminorm& sx = f.domain().seminorm(level);
  const Seminorm& sy = f.codomain().seminorm(level);
  const Seminorm& sz = g.codomain().seminorm(level);
  const std::size_t dx = sx.dim();
  // Variables: x (dx entries), then s_y, s_z, s_x.
  const std::size_t nv = dx + 3;
  std::vector<LinearConstraint> cons;
  auto bound_abs = [&](const Vec& coeff_x, const Rational& constant, std::size_t slack) {
    // |constant + coeff_x · x| <= s
    for (int sign : {1, -1}) {
      LinearConstraint lc;
      lc.coeffs = zeros(nv);
      for (std::size_t i = 0; i < dx; ++i) lc.coeffs[i] = sign * coeff_x[i];
      lc.coeffs[slack] = -1;
      lc.rel = Relation::LessEq;
      lc.rhs = -sign * constant;
      cons.push_back(std::move(lc));
    }
  };
  for (const auto& a : sy.functionals()) bound_abs(negate(f.matrix().apply_transpose(a)), dot(a, y), dx);
  for (const auto& a : sz.functionals()) bound_abs(g.matrix().apply_transpose(a), dot(a, z), dx + 1);
  for (const auto& a : sx.functionals()) bound_abs(a, Rational(0), dx + 2);
  for (std::size_t s = dx; s < nv; ++s) {
    LinearConstraint lc;
    lc.coeffs = zeros(nv);
    lc.coeffs[s] = 1;
    lc.rel = Relation::GreaterEq;
    lc.rhs = 0;
    cons.push_back(std::move(lc));
  }
  Vec obj = zeros(nv);
  obj[dx] = 1;
  obj[dx + 1] = 1;
  obj[dx + 2] = c;
  return minimize(obj, cons).value;
}

AmalgamResult pushout_nap(const MultiSpace& x, const MultiSpace& y, const MultiSpace& z, const LinearMap& f,
                          const LinearMap& g, const Rational& delta, const Rational& eps, const PushoutOptions& opts) {
  require_positive_eps(eps);
  if (sgn(delta) < 0) throw Error(ErrorKind::Format, "delta must be non-negative");
  require_span(x, y, z, f, g);
  const LinearMap fx = f.retarget(x, y);
  const LinearMap gx = g.retarget(x, z);
  if (opts.check_inputs) {
    require_embedding(fx, delta, "f");
    require_embedding(gx, delta, "g");
  }
  const Rational c = pushout_constant(delta, eps);
  const std::size_t lx = x.length();
  const std::size_t short_len = std::min(y.length(), z.length());
  const std::size_t long_len = std::max(y.length(), z.length());
  const std::size_t total = y.dim() + z.dim();

  std::vector<Seminorm> seq =
      parallel_map<Seminorm>(lx, [&](std::size_t n) { return infimal_pushout_seminorm(fx, gx, n, c); });
  for (std::size_t n = lx; n < long_len; ++n) {
    Seminorm s = n < short_len ? block_max(y.seminorm(n), z.seminorm(n))
                 : y.length() > z.length() ? embed_block(y.seminorm(n), total, 0)
                                           : embed_block(z.seminorm(n), total, y.dim());
    if (opts.graded && !seq.empty()) s = max_of(seq.back(), s);
    seq.push_back(std::move(s));
  }
  MultiSpace w(total, std::move(seq), opts.graded);
  if (opts.separated) w = extend_with_norm(w);

  AmalgamResult out;
  out.w = w;
  out.leg_y = LinearMap(y, w, block_inclusion(total, 0, y.dim()));
  out.leg_z = LinearMap(z, w, block_inclusion(total, y.dim(), z.dim()));
  out.delta = delta;
  out.eps = eps;
  out.bound = 2 * delta + eps;
  out.bound.canonicalize();
  const LinearMap a = compose(out.leg_y, fx);
  const LinearMap b = compose(out.leg_z, gx);
  for (std::size_t n = 0; n < lx; ++n) {
    auto d = map_distance(a, b, n);
    if (!d.value) throw Error(ErrorKind::Unbounded, "pushout legs disagree on a kernel vector");
    out.certificate.push_back(*d.value);
  }
  return out;
}

AmalgamResult pushout_n_embedding(const MultiSpace& x, const MultiSpace& y, const MultiSpace& z,
                                  const LinearMap& f, const LinearMap& g, std::size_t n, const Rational& eps) {
  require_positive_eps(eps);
  require_span(x, y, z, f, g);
  const std::size_t len = x.length();
  if (y.length() != len || z.length() != len)
    throw Error(ErrorKind::LengthMismatch, "n-embedding amalgamation needs equal lengths");
  if (n > len) throw Error(ErrorKind::BadLevel, "n exceeds the common length");
  const LinearMap fx = f.retarget(x, y);
  const LinearMap gx = g.retarget(x, z);
  if (n > 0) {
    for (const auto* m : {&fx, &gx}) {
      LinearMap t(truncate(m->domain(), n), truncate(m->codomain(), n), m->matrix());
      auto check = is_embedding(t, Rational(0));
      if (!check.ok) {
        nlohmann::json w;
        w["map"] = m == &fx ? "f" : "g";
        w["failure"] = std::string(name(check.kind));
        w["level"] = check.level;
        std::vector<std::string> xs;
        for (const auto& q : check.witness) xs.push_back(to_string(q));
        w["vector"] = xs;
        throw Error(ErrorKind::NotAnNEmbedding, "map does not preserve the first n seminorms", w);
      }
    }
  }
  const std::size_t total = y.dim() + z.dim();
  std::vector<Seminorm> seq = parallel_map<Seminorm>(len, [&](std::size_t m) {
    return m < n ? infimal_pushout_seminorm(fx, gx, m, eps) : block_sum(y.seminorm(m), z.seminorm(m));
  });
  const bool graded = x.graded() && y.graded() && z.graded();
  MultiSpace w(total, std::move(seq), graded);

  AmalgamResult out;
  out.w = w;
  out.leg_y = LinearMap(y, w, block_inclusion(total, 0, y.dim()));
  out.leg_z = LinearMap(z, w, block_inclusion(total, y.dim(), z.dim()));
  out.delta = 0;
  out.eps = eps;
  out.bound = eps;
  const LinearMap a = compose(out.leg_y, fx);
  const LinearMap b = compose(out.leg_z, gx);
  for (std::size_t m = 0; m < n; ++m) {
    auto d = map_distance(a, b, m);
    if (!d.value) throw Error(ErrorKind::Unbounded, "pushout legs disagree on a kernel vector");
    out.certificate.push_back(*d.value);
  }
  return out;
}

namespace {

// Quotient of a space by the kernel of its level-i seminorm, as a
// single-seminorm space, together with the projection and a section.
struct LevelQuotient {
  MultiSpace space;
  Matrix projection;  // rank x dim
  Matrix section;     // dim x rank, projection * section = id
};

LevelQuotient level_quotient(const MultiSpace& x, std::size_t i) {
  const Seminorm& s = x.seminorm(i);
  QuotientNorm q = quotient_norm(s);
  const auto& coords = s.quotient_coords();
  Matrix section(x.dim(), coords.size());
  for (std::size_t k = 0; k < coords.size(); ++k) section(coords[k], k) = 1;
  return {MultiSpace(coords.size(), {q.norm}, true), q.projection, section};
}

}  // namespace

AmalgamResult product_amalgam(const MultiSpace& x, const MultiSpace& y, const MultiSpace& z, const LinearMap& f,
                              const LinearMap& g, const Rational& delta, const Rational& eps) {
  require_positive_eps(eps);
  require_span(x, y, z, f, g);
  for (const auto* s : {&x, &y, &z})
    if (!is_separated(*s)) throw Error(ErrorKind::NotSeparated, "product amalgamation needs separated spaces");
  const LinearMap fx = f.retarget(x, y);
  const LinearMap gx = g.retarget(x, z);
  require_embedding(fx, delta, "f");
  require_embedding(gx, delta, "g");

  const std::size_t lx = x.length();
  const std::size_t long_len = std::max(y.length(), z.length());

  struct Level {
    MultiSpace w;
    Matrix leg_y;  // w.dim x y.dim, zero when the level is past Y
    Matrix leg_z;
  };
  std::vector<Level> levels = parallel_map<Level>(long_len, [&](std::size_t i) {
    const bool has_y = i < y.length();
    const bool has_z = i < z.length();
    if (has_y && has_z) {
      LevelQuotient qy = level_quotient(y, i);
      LevelQuotient qz = level_quotient(z, i);
      AmalgamResult r;
      if (i < lx) {
        LevelQuotient qx = level_quotient(x, i);
        LinearMap fi(qx.space, qy.space, qy.projection * f.matrix() * qx.section);
        LinearMap gi(qx.space, qz.space, qz.projection * g.matrix() * qx.section);
        r = pushout_nap(qx.space, qy.space, qz.space, fi, gi, delta, eps, {false, false, false});
      } else {
        MultiSpace triv = MultiSpace::trivial();
        LinearMap fi(triv, qy.space, Matrix(qy.space.dim(), 0));
        LinearMap gi(triv, qz.space, Matrix(qz.space.dim(), 0));
        r = pushout_nap(triv, qy.space, qz.space, fi, gi, Rational(0), eps, {false, false, false});
      }
      return Level{r.w, r.leg_y.matrix() * qy.projection, r.leg_z.matrix() * qz.projection};
    }
    LevelQuotient q = level_quotient(has_y ? y : z, i);
    Matrix zero_y(q.space.dim(), y.dim());
    Matrix zero_z(q.space.dim(), z.dim());
    return has_y ? Level{q.space, q.projection, zero_z} : Level{q.space, zero_y, q.projection};
  });

  std::vector<MultiSpace> factors;
  Matrix leg_y(0, y.dim());
  Matrix leg_z(0, z.dim());
  for (auto& l : levels) {
    factors.push_back(l.w);
    leg_y = stack_rows(leg_y, l.leg_y);
    leg_z = stack_rows(leg_z, l.leg_z);
  }
  MultiSpace w = product_space(factors, ProductMode::Coordinate);

  AmalgamResult out;
  out.w = w;
  out.leg_y = LinearMap(y, w, leg_y);
  out.leg_z = LinearMap(z, w, leg_z);
  out.delta = delta;
  out.eps = eps;
  out.bound = 2 * delta + eps;
  out.bound.canonicalize();
  const LinearMap a = compose(out.leg_y, fx);
  const LinearMap b = compose(out.leg_z, gx);
  for (std::size_t n = 0; n < lx; ++n) {
    auto d = map_distance(a, b, n);
    if (!d.value) throw Error(ErrorKind::Unbounded, "product legs disagree on a kernel vector");
    out.certificate.push_back(*d.value);
  }
  return out;
}

MultiAmalgamResult multi_amalgam(const MultiSpace& y, const std::vector<AmalgamPair>& pairs, const Rational& eps,
                                 const PushoutOptions& opts) {
  require_positive_eps(eps);
  MultiAmalgamResult out;
  out.z = y;
  out.i = LinearMap::identity(y);
  for (const auto& p : pairs) {
    if (p.gamma.codomain().dim() != y.dim() || p.eta.codomain().dim() != y.dim())
      throw Error(ErrorKind::ShapeMismatch, "pair does not map into Y");
    LinearMap f = compose(out.i, p.gamma.retarget(p.x, y));
    LinearMap g = p.eta.retarget(p.x, y);
    if (opts.check_inputs) {
      require_embedding(p.gamma.retarget(p.x, y), p.delta, "gamma");
      require_embedding(g, p.delta, "eta");
    }
    PushoutOptions inner = opts;
    inner.check_inputs = false;
    inner.separated = false;
    AmalgamResult r = pushout_nap(p.x, out.z, y, f, g, p.delta, eps, inner);
    out.i = compose(r.leg_y, out.i);
    for (auto& j : out.j) j = compose(r.leg_y, j);
    out.j.push_back(r.leg_z);
    out.z = r.w;
  }
  if (opts.separated && !pairs.empty()) {
    MultiSpace w = extend_with_norm(out.z);
    out.i = out.i.retarget(y, w);
    for (auto& j : out.j) j = j.retarget(y, w);
    out.z = w;
  }
  // Certificates are recomputed on the final maps.
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& p = pairs[k];
    const LinearMap a = compose(out.i, p.gamma.retarget(p.x, y));
    const LinearMap b = compose(out.j[k], p.eta.retarget(p.x, y));
    std::vector<Rational> cert;
    for (std::size_t l = 0; l < p.x.length(); ++l) {
      auto d = map_distance(a, b, l);
      if (!d.value) throw Error(ErrorKind::Unbounded, "amalgam maps disagree on a kernel vector");
      cert.push_back(*d.value);
    }
    out.certificates.push_back(std::move(cert));
    Rational bound = 2 * p.delta + eps;
    bound.canonicalize();
    out.bounds.push_back(bound);
  }
  return out;
}

}  // namespace msn
