#include "msn/linear_map.hpp"

#include "msn/error.hpp"
#include "msn/lp.hpp"
#include "msn/parallel.hpp"
#include "msn/subspace.hpp"

#include <algorithm>
#include <random>

namespace msn {

LinearMap::LinearMap(MultiSpace domain, MultiSpace codomain, Matrix matrix)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != codomain_.dim() || matrix_.cols() != domain_.dim())
    throw Error(ErrorKind::ShapeMismatch, "matrix shape does not match the spaces");
}

LinearMap LinearMap::identity(const MultiSpace& x) { return LinearMap(x, x, Matrix::identity(x.dim())); }

LinearMap LinearMap::retarget(const MultiSpace& domain, const MultiSpace& codomain) const {
  return LinearMap(domain, codomain, matrix_);
}

LinearMap compose(const LinearMap& g, const LinearMap& f) {
  if (f.codomain().dim() != g.domain().dim()) throw Error(ErrorKind::ShapeMismatch, "maps cannot be composed");
  return LinearMap(f.domain(), g.codomain(), g.matrix() * f.matrix());
}

LinearMap difference(const LinearMap& f, const LinearMap& g) {
  if (f.matrix().rows() != g.matrix().rows() || f.matrix().cols() != g.matrix().cols())
    throw Error(ErrorKind::ShapeMismatch, "maps have different shapes");
  return LinearMap(f.domain(), f.codomain(), f.matrix() - g.matrix());
}

bool is_injective(const LinearMap& f) { return rank(f.matrix()) == f.domain().dim(); }

OperatorNorm operator_seminorm(const LinearMap& f, std::size_t m) {
  if (m >= f.domain().length() || m >= f.codomain().length())
    throw Error(ErrorKind::BadLevel, "level " + std::to_string(m) + " not shared by domain and codomain");
  const Seminorm& sx = f.domain().seminorm(m);
  const Seminorm& sy = f.codomain().seminorm(m);
  OperatorNorm out;
  for (const auto& k : sx.kernel())
    if (sgn(sy(f(k))) != 0) {
      out.witness = k;
      return out;
    }
  Rational best(0);
  for (const auto& w : sx.ball_vertices()) {
    Rational val = sy(f(w));
    if (out.witness.empty() || val > best) {
      best = val;
      out.witness = w;
    }
  }
  out.value = best;
  return out;
}

std::optional<Rational> multi_bounded_norm(const LinearMap& f) {
  Rational best(0);
  for (std::size_t m = 0; m < f.domain().length(); ++m) {
    auto r = operator_seminorm(f, m);
    if (!r.value) return std::nullopt;
    if (*r.value > best) best = *r.value;
  }
  return best;
}

namespace {

struct FacetMin {
  Rational value;
  Vec point;
};

// min ||f x||_Y subject to phi(x) = 1 and ||x||_X <= 1.
FacetMin facet_minimum(const LinearMap& f, const Seminorm& sx, const Seminorm& sy, const Vec& phi) {
  const std::size_t d = sx.dim();
  std::vector<LinearConstraint> cons;
  cons.push_back({concat(phi, Vec{0}), Relation::Equal, 1});
  for (const auto& g : sx.functionals()) {
    if (g == phi) continue;
    cons.push_back({concat(g, Vec{0}), Relation::LessEq, 1});
    cons.push_back({concat(negate(g), Vec{0}), Relation::LessEq, 1});
  }
  cons.push_back({unit_vector(d + 1, d), Relation::GreaterEq, 0});
  for (const auto& psi : sy.functionals()) {
    Vec pulled = f.matrix().apply_transpose(psi);
    cons.push_back({concat(pulled, Vec{-1}), Relation::LessEq, 0});
    cons.push_back({concat(negate(pulled), Vec{-1}), Relation::LessEq, 0});
  }
  LPResult r = minimize(unit_vector(d + 1, d), cons);
  return {r.value, Vec(r.point.begin(), r.point.end() - 1)};
}

}  // namespace

DistortionReport distortion(const LinearMap& f) {
  if (f.domain().length() > f.codomain().length())
    throw Error(ErrorKind::LengthMismatch, "domain is longer than codomain");
  DistortionReport rep;
  rep.injective = is_injective(f);
  bool infinite = !rep.injective;
  Rational delta(0);
  for (std::size_t m = 0; m < f.domain().length(); ++m) {
    LevelDistortion lev;
    OperatorNorm up = operator_seminorm(f, m);
    lev.upper = up.value;
    lev.upper_witness = up.witness;
    const Seminorm& sx = f.domain().seminorm(m);
    const Seminorm& sy = f.codomain().seminorm(m);
    if (!sx.is_zero()) {
      const auto& fs = sx.functionals();
      auto mins = parallel_map<FacetMin>(fs.size(), [&](std::size_t i) { return facet_minimum(f, sx, sy, fs[i]); });
      std::size_t best = 0;
      for (std::size_t i = 1; i < mins.size(); ++i)
        if (mins[i].value < mins[best].value) best = i;
      lev.lower = mins[best].value;
      lev.lower_witness = mins[best].point;
    }
    if (!lev.upper) {
      infinite = true;
    } else if (*lev.upper > 1) {
      delta = std::max(delta, Rational(*lev.upper - 1));
    }
    if (lev.lower) {
      if (sgn(*lev.lower) == 0)
        infinite = true;
      else if (*lev.lower < 1)
        delta = std::max(delta, Rational(1 / *lev.lower - 1));
    }
    rep.levels.push_back(std::move(lev));
  }
  if (!infinite) rep.minimal_delta = delta;
  return rep;
}

std::string_view name(EmbeddingFailure kind) {
  switch (kind) {
    case EmbeddingFailure::None: return "none";
    case EmbeddingFailure::Length: return "length";
    case EmbeddingFailure::Injectivity: return "injectivity";
    case EmbeddingFailure::Kernel: return "kernel";
    case EmbeddingFailure::Upper: return "upper";
    case EmbeddingFailure::Lower: return "lower";
  }
  return "unknown";
}

namespace {

// Exact isometry test: the pulled-back functionals span the same dual ball.
bool preserves_seminorms(const LinearMap& f) {
  for (std::size_t m = 0; m < f.domain().length(); ++m) {
    const Seminorm& sx = f.domain().seminorm(m);
    std::vector<Vec> fs;
    for (const auto& psi : f.codomain().seminorm(m).functionals()) {
      Vec phi = f.matrix().apply_transpose(psi);
      if (!is_zero(phi)) fs.push_back(sign_canonical(std::move(phi)));
    }
    std::sort(fs.begin(), fs.end(), LexLess{});
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    if (fs == sx.functionals()) continue;
    if (Seminorm::make(sx.dim(), std::move(fs)) != sx) return false;
  }
  return true;
}

}  // namespace

EmbeddingCheck is_embedding(const LinearMap& f, const Rational& delta) {
  EmbeddingCheck c;
  if (f.domain().length() > f.codomain().length()) {
    c.kind = EmbeddingFailure::Length;
    return c;
  }
  auto ker = kernel_basis(f.matrix());
  if (!ker.empty()) {
    c.kind = EmbeddingFailure::Injectivity;
    c.witness = ker.front();
    return c;
  }
  if (preserves_seminorms(f)) {
    c.ok = true;
    return c;
  }
  const Rational hi = 1 + delta;
  const Rational lo = 1 / hi;
  for (std::size_t m = 0; m < f.domain().length(); ++m) {
    const Seminorm& sx = f.domain().seminorm(m);
    const Seminorm& sy = f.codomain().seminorm(m);
    OperatorNorm up = operator_seminorm(f, m);
    if (!up.value) {
      c.kind = EmbeddingFailure::Kernel;
      c.level = m;
      c.witness = up.witness;
      c.value = sy(f(up.witness));
      return c;
    }
    if (*up.value > hi) {
      c.kind = EmbeddingFailure::Upper;
      c.level = m;
      c.witness = up.witness;
      c.value = *up.value;
      return c;
    }
    for (const auto& phi : sx.functionals()) {
      FacetMin fm = facet_minimum(f, sx, sy, phi);
      if (fm.value < lo) {
        c.kind = EmbeddingFailure::Lower;
        c.level = m;
        c.witness = fm.point;
        c.value = fm.value;
        return c;
      }
    }
  }
  c.ok = true;
  return c;
}

void require_embedding(const LinearMap& f, const Rational& delta, const std::string& what) {
  EmbeddingCheck c = is_embedding(f, delta);
  if (c.ok) return;
  nlohmann::json w;
  w["map"] = what;
  w["failure"] = std::string(name(c.kind));
  w["level"] = c.level;
  w["delta"] = to_string(delta);
  std::vector<std::string> xs;
  for (const auto& q : c.witness) xs.push_back(to_string(q));
  w["vector"] = xs;
  w["value"] = to_string(c.value);
  throw Error(ErrorKind::NotAnEmbedding, what + " is not a multi-" + to_string(delta) + "-isometric embedding", w);
}

OperatorNorm map_distance(const LinearMap& f, const LinearMap& g, std::size_t m) {
  if (!(f.domain() == g.domain()) || f.codomain().dim() != g.codomain().dim())
    throw Error(ErrorKind::ShapeMismatch, "maps have different domains or codomains");
  return operator_seminorm(difference(f, g), m);
}

namespace {

// Basis (as matrices) of {h : h(ker X_k) ⊆ ker Y_k for every k}.
std::vector<Matrix> compatible_maps(const MultiSpace& x, const MultiSpace& y) {
  const std::size_t n = x.dim(), p = y.dim();
  std::vector<Vec> rows;
  for (std::size_t k = 0; k < x.length(); ++k) {
    for (const auto& u : x.seminorm(k).kernel())
      for (const auto& psi : y.seminorm(k).functionals()) {
        Vec row(p * n);
        for (std::size_t a = 0; a < p; ++a)
          for (std::size_t b = 0; b < n; ++b)
            if (sgn(psi[a]) != 0 && sgn(u[b]) != 0) row[a * n + b] = psi[a] * u[b];
        rows.push_back(std::move(row));
      }
  }
  std::vector<Vec> flat;
  if (rows.empty()) {
    for (std::size_t i = 0; i < p * n; ++i) flat.push_back(unit_vector(p * n, i));
  } else {
    flat = kernel_basis(Matrix::from_rows(rows, p * n));
  }
  std::vector<Matrix> out;
  for (const auto& v : flat) {
    Matrix h(p, n);
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = 0; b < n; ++b) h(a, b) = v[a * n + b];
    out.push_back(std::move(h));
  }
  return out;
}

// Dimension of the sum of all kernel intersections indexed by `mask`'s subsets
// is an isomorphism invariant not recorded by alpha; returns a mask where the
// dimensions of sum(ker_k, k in mask) differ, if any.
std::optional<std::size_t> sum_obstruction(const MultiSpace& x, const MultiSpace& y) {
  const std::size_t subsets = std::size_t{1} << x.length();
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    std::vector<Vec> sx, sy;
    for (std::size_t k = 0; k < x.length(); ++k)
      if ((mask >> k) & 1U) {
        sx = sum_spans(sx, x.seminorm(k).kernel(), x.dim());
        sy = sum_spans(sy, y.seminorm(k).kernel(), y.dim());
      }
    if (sx.size() != sy.size()) return mask;
  }
  return std::nullopt;
}

struct Candidate {
  LinearMap map;
  Rational forward, inverse;
};

std::vector<Candidate> iso_candidates(const MultiSpace& x, const MultiSpace& y, std::uint64_t seed,
                                      std::size_t wanted, std::string& reason) {
  std::vector<Candidate> found;
  if (x.length() != y.length()) throw Error(ErrorKind::LengthMismatch, "spaces have different lengths");
  if (!(invariant_alpha(x) == invariant_alpha(y))) {
    reason = "kernel invariants differ";
    return found;
  }
  const std::size_t n = x.dim();
  if (n == 0) {
    found.push_back({LinearMap(x, y, Matrix(0, 0)), Rational(0), Rational(0)});
    return found;
  }
  if (auto mask = sum_obstruction(x, y)) {
    reason = "kernel invariants agree but the sums of kernels over {" + subset_key(*mask) + "} have different dimensions";
    return found;
  }
  std::vector<Matrix> basis = compatible_maps(x, y);
  std::vector<Matrix> tries;
  Matrix id = Matrix::identity(n);
  bool id_ok = true;
  for (std::size_t k = 0; k < x.length() && id_ok; ++k)
    for (const auto& u : x.seminorm(k).kernel())
      if (sgn(y.seminorm(k)(u)) != 0) {
        id_ok = false;
        break;
      }
  if (id_ok) tries.push_back(id);
  if (!basis.empty()) {
    Matrix sum = basis.front();
    for (std::size_t i = 1; i < basis.size(); ++i) sum = sum + basis[i];
    tries.push_back(sum);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coef(-16, 16);
    for (int t = 0; t < 64; ++t) {
      Matrix h(n, n);
      for (const auto& b : basis) h = h + Rational(coef(rng)) * b;
      tries.push_back(std::move(h));
    }
  }
  for (const auto& h : tries) {
    if (found.size() >= wanted) break;
    if (determinant(h) == 0) continue;
    LinearMap fwd(x, y, h);
    LinearMap inv(y, x, inverse(h));
    auto a = multi_bounded_norm(fwd);
    auto b = multi_bounded_norm(inv);
    if (a && b) found.push_back({fwd, *a, *b});
  }
  if (found.empty()) reason = "no invertible kernel-compatible map found by the seeded search";
  return found;
}

}  // namespace

IsoResult build_iso_from_invariant(const MultiSpace& x, const MultiSpace& y, std::uint64_t seed) {
  IsoResult r;
  auto cands = iso_candidates(x, y, seed, 1, r.reason);
  if (!cands.empty()) {
    r.iso = cands.front().map;
    r.forward_norm = cands.front().forward;
    r.inverse_norm = cands.front().inverse;
  }
  return r;
}

std::optional<Rational> bm_upper_bound(const MultiSpace& x, const MultiSpace& y, std::uint64_t seed) {
  std::string reason;
  auto cands = iso_candidates(x, y, seed, 8, reason);
  if (cands.empty()) return std::nullopt;
  std::optional<Rational> best;
  for (const auto& c : cands) {
    Rational prod = c.forward * c.inverse;
    if (prod < 1) prod = 1;
    if (!best || prod < *best) best = prod;
  }
  return best;
}

}  // namespace msn
