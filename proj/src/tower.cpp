#include "msn/tower.hpp"

#include "msn/amalgam.hpp"
#include "msn/error.hpp"
#include "msn/io.hpp"
#include "msn/parallel.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>

namespace msn {

using nlohmann::json;

std::string_view name(DischargeMethod m) {
  switch (m) {
    case DischargeMethod::Link: return "link";
    case DischargeMethod::Automorphism: return "automorphism";
    case DischargeMethod::Amalgam: return "amalgam";
  }
  return "?";
}

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  long range(long lo, long hi) { return lo + static_cast<long>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::mt19937_64 engine_;
};

// max over l < levels of ||f - g||_l; empty when some level is unbounded.
std::optional<Rational> max_distance(const LinearMap& f, const LinearMap& g, std::size_t levels) {
  Rational best = 0;
  for (std::size_t l = 0; l < levels; ++l) {
    auto d = map_distance(f, g, l);
    if (!d.value) return std::nullopt;
    if (*d.value > best) best = *d.value;
  }
  return best;
}

std::vector<Rational> level_distances(const LinearMap& f, const LinearMap& g) {
  std::vector<Rational> out;
  for (std::size_t l = 0; l < f.domain().length(); ++l) {
    auto d = map_distance(f, g, l);
    if (!d.value) throw Error(ErrorKind::NotAnEmbedding, "certificate distance is unbounded");
    out.push_back(*d.value);
  }
  return out;
}

Rational max_of(const std::vector<Rational>& v) {
  Rational m = 0;
  for (const auto& q : v)
    if (q > m) m = q;
  return m;
}

json vec_json(const Vec& v) { return io::to_json(v); }

}  // namespace

LinearMap Tower::composite(std::size_t m, std::size_t n) const {
  if (m > n || n >= stages.size()) throw Error(ErrorKind::BadLevel, "composite link outside the tower");
  LinearMap out = LinearMap::identity(stages[m]);
  for (std::size_t k = m; k < n; ++k) out = compose(links[k], out);
  return out;
}

const MultiSpace& Tower::source_space(const SourceRef& s) const {
  const auto& list = s.catalog ? catalog : stages;
  if (s.index >= list.size()) throw Error(ErrorKind::Format, "pair source index out of range");
  return list[s.index];
}

std::vector<Matrix> signed_permutation_isometries(const MultiSpace& x, const MultiSpace& y, std::size_t limit) {
  std::vector<Matrix> out;
  const std::size_t d = x.dim();
  if (d != y.dim() || x.length() > y.length() || limit == 0) return out;
  const std::size_t levels = x.length();
  if (d == 0) {
    out.push_back(Matrix(0, 0));
    return out;
  }
  for (std::size_t l = 0; l < levels; ++l)
    if (x.seminorm(l).functionals().size() != y.seminorm(l).functionals().size()) return out;

  // Column signature: per level, the sorted absolute entries of that column.
  auto signature = [&](const MultiSpace& s, std::size_t c) {
    std::vector<std::vector<Rational>> sig(levels);
    for (std::size_t l = 0; l < levels; ++l) {
      for (const auto& phi : s.seminorm(l).functionals()) sig[l].push_back(abs(phi[c]));
      std::sort(sig[l].begin(), sig[l].end());
    }
    return sig;
  };
  std::vector<std::vector<std::vector<Rational>>> sx(d), sy(d);
  for (std::size_t c = 0; c < d; ++c) {
    sx[c] = signature(x, c);
    sy[c] = signature(y, c);
  }

  std::vector<std::size_t> perm(d);
  std::vector<int> sign(d);
  std::vector<bool> used(d, false);

  // Multisets of sign-canonical restrictions to the first k+1 columns agree.
  auto consistent = [&](std::size_t k) {
    for (std::size_t l = 0; l < levels; ++l) {
      std::vector<Vec> a, b;
      for (const auto& phi : x.seminorm(l).functionals()) a.push_back(sign_canonical(Vec(phi.begin(), phi.begin() + static_cast<long>(k) + 1)));
      for (const auto& psi : y.seminorm(l).functionals()) {
        Vec r(k + 1);
        for (std::size_t i = 0; i <= k; ++i) r[i] = sign[i] > 0 ? psi[perm[i]] : Rational(-psi[perm[i]]);
        b.push_back(sign_canonical(std::move(r)));
      }
      std::sort(a.begin(), a.end(), LexLess{});
      std::sort(b.begin(), b.end(), LexLess{});
      if (a != b) return false;
    }
    return true;
  };

  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (out.size() >= limit) return;
    if (k == d) {
      Matrix p(d, d);
      for (std::size_t i = 0; i < d; ++i) p(perm[i], i) = sign[i];
      out.push_back(std::move(p));
      return;
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (used[j] || sx[k] != sy[j]) continue;
      for (int s : {1, -1}) {
        perm[k] = j;
        sign[k] = s;
        if (!consistent(k)) continue;
        used[j] = true;
        self(self, k + 1);
        used[j] = false;
        if (out.size() >= limit) return;
      }
    }
  };
  rec(rec, 0);
  return out;
}

namespace {

struct Candidate {
  SourceRef source;
  std::size_t delta_index;
  LinearMap gamma, eta;
  bool requested = false;
};

struct Classified {
  bool cheap = false;
  std::size_t automorphism = 0;
};

// Unit-sphere embeddings of a one-dimensional source into x.
std::vector<LinearMap> sphere_embeddings(Rng& rng, const MultiSpace& z, const MultiSpace& x, std::size_t want) {
  std::vector<LinearMap> out;
  if (z.dim() != 1 || x.dim() == 0) return out;
  const Vec e{Rational(1)};
  std::size_t ref = z.length();
  for (std::size_t l = 0; l < z.length(); ++l)
    if (z.seminorm(l)(e) > 0) {
      ref = l;
      break;
    }
  if (ref == z.length()) return out;
  for (std::size_t attempt = 0; attempt < 4 * want && out.size() < want; ++attempt) {
    Vec v(x.dim());
    for (auto& c : v) c = Rational(rng.range(-2, 2));
    Rational nv = x.seminorm(ref)(v);
    if (nv == 0) continue;
    Rational t = z.seminorm(ref)(e) / nv;
    for (auto& c : v) c *= t;
    bool ok = true;
    for (std::size_t l = 0; l < z.length() && ok; ++l) ok = x.seminorm(l)(v) == z.seminorm(l)(e);
    if (!ok) continue;
    Matrix m(x.dim(), 1);
    for (std::size_t r = 0; r < x.dim(); ++r) m(r, 0) = v[r];
    out.push_back(LinearMap(z, x, m));
  }
  return out;
}

LinearMap scaled_map(const LinearMap& f, const Rational& c) {
  Matrix m = f.matrix();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t k = 0; k < m.cols(); ++k) m(r, k) *= c;
  return LinearMap(f.domain(), f.codomain(), m);
}

}  // namespace

Tower build_tower(const std::vector<MultiSpace>& catalog, const TowerOptions& opts) {
  if (catalog.empty()) throw Error(ErrorKind::ArityMismatch, "empty catalog");
  if (opts.stages < 1) throw Error(ErrorKind::BadLength, "a tower needs at least one stage");
  if (opts.deltas.empty() || opts.deltas.front() != 0)
    throw Error(ErrorKind::Format, "the delta list must start with 0");
  for (const auto& d : opts.deltas)
    if (d < 0) throw Error(ErrorKind::Format, "deltas must be non-negative");
  for (std::size_t m = 0; m < catalog.size(); ++m)
    if (!is_separated(catalog[m]))
      throw Error(ErrorKind::CatalogNotSeparated, "catalog member " + std::to_string(m) + " is not separated",
                  json{{"index", m}});

  bool graded = std::all_of(catalog.begin(), catalog.end(), [](const MultiSpace& z) { return z.graded(); });
  PushoutOptions popts{graded, false, false};

  Tower t;
  t.catalog = catalog;
  t.deltas = opts.deltas;
  t.omega = opts.omega;
  t.seed = opts.seed;

  // Stage 0: joint embedding of the catalog by repeated sums over {0}.
  MultiSpace x = catalog[0];
  std::vector<LinearMap> emb{LinearMap::identity(x)};
  for (std::size_t m = 1; m < catalog.size(); ++m) {
    MultiSpace triv = MultiSpace::trivial();
    auto r = pushout_nap(triv, x, catalog[m], LinearMap(triv, x, Matrix(x.dim(), 0)),
                         LinearMap(triv, catalog[m], Matrix(catalog[m].dim(), 0)), 0, 1, popts);
    for (auto& e : emb) e = compose(r.leg_y, e);
    emb.push_back(r.leg_z);
    x = r.w;
  }
  if (!is_separated(x)) {
    auto sq = separated_quotient(x);
    for (auto& e : emb) e = LinearMap(e.domain(), sq.space, sq.projection * e.matrix());
    x = sq.space;
  }
  t.stages.push_back(x);
  t.embeddings.push_back(emb);

  Rng rng(opts.seed);
  for (std::size_t n = 0; n + 1 < opts.stages; ++n) {
    const MultiSpace& xn = t.stages[n];
    const Rational eps = pow2_neg(static_cast<unsigned>(n));
    std::vector<Matrix> autos = signed_permutation_isometries(xn, xn, opts.max_automorphisms);

    // Pool of exact embeddings of every available source into X_n.
    std::vector<SourceRef> sources;
    for (std::size_t m = 0; m < catalog.size(); ++m) sources.push_back({true, m});
    for (std::size_t j = 0; j <= n; ++j) sources.push_back({false, j});
    auto pool_for = [&](const SourceRef& s) {
      const MultiSpace& src = t.source_space(s);
      LinearMap base = s.catalog ? t.embeddings[n][s.index] : t.composite(s.index, n);
      std::vector<LinearMap> pool{base};
      for (std::size_t a = 0; a < 2 && autos.size() > 1; ++a)
        pool.push_back(compose(LinearMap(xn, xn, autos[1 + rng.below(autos.size() - 1)]), base));
      if (n > 0 && (s.catalog || s.index < n)) {
        LinearMap prev = s.catalog ? t.embeddings[n - 1][s.index] : t.composite(s.index, n - 1);
        for (const auto& rec : t.certificates[n - 1]) pool.push_back(compose(rec.j, prev));
      }
      if (opts.sphere_pairs)
        for (auto& e : sphere_embeddings(rng, src, xn, 2)) pool.push_back(std::move(e));
      return pool;
    };

    std::vector<Candidate> cands;
    for (std::size_t p = 0; p < opts.pairs_per_stage; ++p) {
      SourceRef s = sources[rng.below(sources.size())];
      std::size_t k = rng.below(std::min(n + 1, opts.deltas.size()));
      auto pool = pool_for(s);
      LinearMap gamma = pool[rng.below(pool.size())];
      LinearMap eta = pool[rng.below(pool.size())];
      const Rational& delta = opts.deltas[k];
      if (delta > 0) {
        Rational up = 1 + delta;
        Rational factors[3] = {Rational(1), up, Rational(1 / up)};
        gamma = scaled_map(gamma, factors[rng.below(3)]);
        eta = scaled_map(eta, factors[rng.below(3)]);
      }
      cands.push_back({s, k, gamma, eta, false});
    }
    for (const auto& r : opts.requested) {
      if (r.stage != n) continue;
      if (r.delta_index >= opts.deltas.size()) throw Error(ErrorKind::Format, "requested pair delta index out of range");
      const MultiSpace& src = t.source_space(r.source);
      LinearMap gamma(src, xn, r.gamma), eta(src, xn, r.eta);
      require_embedding(gamma, opts.deltas[r.delta_index], "requested gamma");
      require_embedding(eta, opts.deltas[r.delta_index], "requested eta");
      cands.push_back({r.source, r.delta_index, gamma, eta, true});
    }

    // Discharge through an automorphism of X_n whenever one is close enough.
    auto classified = parallel_map<Classified>(cands.size(), [&](std::size_t i) {
      const Candidate& c = cands[i];
      Rational bound = 2 * opts.deltas[c.delta_index] + eps;
      std::optional<Rational> best;
      std::size_t arg = 0;
      for (std::size_t a = 0; a < autos.size(); ++a) {
        auto d = max_distance(c.gamma, compose(LinearMap(xn, xn, autos[a]), c.eta), c.gamma.domain().length());
        if (d && (!best || *d < *best)) {
          best = d;
          arg = a;
          if (*d == 0) break;
        }
      }
      Classified out;
      if (best && *best <= bound) {
        out.cheap = true;
        out.automorphism = arg;
      }
      return out;
    });

    std::vector<AmalgamPair> pairs;
    std::vector<std::size_t> pair_of(cands.size(), SIZE_MAX);
    std::vector<SkippedPair> skipped;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (classified[i].cheap) continue;
      if (xn.dim() * (pairs.size() + 2) > opts.max_dim && !cands[i].requested) {
        skipped.push_back({cands[i].source, cands[i].delta_index, cands[i].gamma, cands[i].eta, "dimension budget"});
        continue;
      }
      pair_of[i] = pairs.size();
      pairs.push_back({cands[i].gamma.domain(), cands[i].gamma, cands[i].eta, opts.deltas[cands[i].delta_index]});
    }

    MultiSpace next = xn;
    Matrix link = Matrix::identity(xn.dim());
    std::vector<Matrix> js;
    if (!pairs.empty()) {
      auto mr = multi_amalgam(xn, pairs, eps, popts);
      next = mr.z;
      link = mr.i.matrix();
      for (const auto& j : mr.j) js.push_back(j.matrix());
      if (!is_separated(next)) {
        auto sq = separated_quotient(next);
        next = sq.space;
        link = sq.projection * link;
        for (auto& j : js) j = sq.projection * j;
      }
    }
    if (opts.omega)
      while (next.length() < n + 1) next = extend_with_norm(next);

    LinearMap in(xn, next, link);
    std::vector<PairRecord> records = parallel_map<PairRecord>(cands.size(), [&](std::size_t i) {
      const Candidate& c = cands[i];
      PairRecord rec;
      rec.source = c.source;
      rec.delta_index = c.delta_index;
      rec.gamma = c.gamma;
      rec.eta = c.eta;
      rec.bound = 2 * opts.deltas[c.delta_index] + eps;
      if (classified[i].cheap) {
        rec.method = classified[i].automorphism == 0 && autos[0] == Matrix::identity(xn.dim())
                         ? DischargeMethod::Link
                         : DischargeMethod::Automorphism;
        rec.j = compose(in, LinearMap(xn, xn, autos[classified[i].automorphism]));
      } else if (pair_of[i] != SIZE_MAX) {
        rec.method = DischargeMethod::Amalgam;
        rec.j = LinearMap(xn, next, js[pair_of[i]]);
      } else {
        return rec;
      }
      rec.values = level_distances(compose(in, c.gamma), compose(rec.j, c.eta));
      return rec;
    });
    std::vector<PairRecord> kept;
    for (std::size_t i = 0; i < cands.size(); ++i)
      if (classified[i].cheap || pair_of[i] != SIZE_MAX) kept.push_back(std::move(records[i]));

    std::vector<LinearMap> next_emb;
    for (const auto& e : t.embeddings[n]) next_emb.push_back(compose(in, e));
    t.stages.push_back(next);
    t.links.push_back(in);
    t.certificates.push_back(std::move(kept));
    t.skipped.push_back(std::move(skipped));
    t.embeddings.push_back(std::move(next_emb));
  }
  return t;
}

DischargeResult discharge(const Tower& t, const MultiSpace& x, const LinearMap& gamma, const LinearMap& eta,
                          const Rational& delta) {
  if (!(gamma.domain() == x) || !(eta.domain() == x))
    throw Error(ErrorKind::ShapeMismatch, "gamma and eta must be defined on X");
  require_embedding(gamma, delta, "gamma");
  require_embedding(eta, delta, "eta");
  for (std::size_t n = 0; n < t.links.size(); ++n) {
    if (!(t.stages[n] == gamma.codomain()) || !(t.stages[n] == eta.codomain())) continue;
    const Rational bound = 2 * delta + pow2_neg(static_cast<unsigned>(n));
    if (gamma.matrix() == eta.matrix()) return {n, t.links[n], 0, 0};
    for (const auto& rec : t.certificates[n]) {
      if (!(rec.gamma.domain() == x) || rec.gamma.matrix() != gamma.matrix() || rec.eta.matrix() != eta.matrix())
        continue;
      Rational value = max_of(level_distances(compose(t.links[n], gamma), compose(rec.j, eta)));
      if (value <= bound) return {n, rec.j, value, bound};
    }
  }
  throw Error(ErrorKind::PairNotInCertificates, "the pair was not discharged while building the tower",
              json{{"gamma", io::to_json(gamma.matrix())}, {"eta", io::to_json(eta.matrix())}});
}

std::vector<TowerCheck> TowerReport::failures() const {
  std::vector<TowerCheck> out;
  for (const auto& c : checks)
    if (!c.ok) out.push_back(c);
  return out;
}

namespace {

TowerCheck embedding_check(const std::string& kind, std::size_t stage, std::size_t item, const LinearMap& f,
                           const Rational& delta) {
  TowerCheck c{kind, stage, item, true, "", nullptr};
  auto e = is_embedding(f, delta);
  if (!e.ok) {
    c.ok = false;
    c.detail = std::string(name(e.kind)) + " failure at level " + std::to_string(e.level);
    c.witness = json{{"level", e.level}, {"vector", vec_json(e.witness)}, {"ratio", to_string(e.value)}};
  }
  return c;
}

}  // namespace

TowerReport verify_tower(const Tower& t) {
  TowerReport r;
  const std::size_t ns = t.stages.size();
  std::vector<std::function<TowerCheck()>> jobs;

  for (std::size_t n = 0; n + 1 < ns && n < t.links.size(); ++n)
    jobs.push_back([&t, n] {
      const LinearMap& f = t.links[n];
      if (!(f.domain() == t.stages[n]) || !(f.codomain() == t.stages[n + 1]))
        return TowerCheck{"link", n, 0, false, "link does not connect consecutive stages", nullptr};
      return embedding_check("link", n, 0, f, 0);
    });
  if (t.links.size() + 1 != ns)
    r.checks.push_back({"link", 0, 0, false, "link count does not match the stage count", nullptr});
  for (std::size_t m = 0; m + 1 < ns; ++m)
    jobs.push_back([&t, m, ns] { return embedding_check("composite", m, ns - 1, t.composite(m, ns - 1), 0); });
  for (std::size_t n = 0; n < t.embeddings.size() && n < ns; ++n)
    for (std::size_t m = 0; m < t.catalog.size(); ++m)
      jobs.push_back([&t, n, m] {
        if (m >= t.embeddings[n].size())
          return TowerCheck{"embedding", n, m, false, "missing catalog embedding", nullptr};
        const LinearMap& e = t.embeddings[n][m];
        if (!(e.domain() == t.catalog[m]) || !(e.codomain() == t.stages[n]))
          return TowerCheck{"embedding", n, m, false, "catalog embedding has the wrong spaces", nullptr};
        return embedding_check("embedding", n, m, e, 0);
      });
  for (std::size_t n = 0; n < t.certificates.size(); ++n)
    for (std::size_t i = 0; i < t.certificates[n].size(); ++i)
      jobs.push_back([&t, n, i] {
        const PairRecord& rec = t.certificates[n][i];
        TowerCheck c{"certificate", n, i, true, "", nullptr};
        if (rec.delta_index >= t.deltas.size() || n + 1 >= t.stages.size()) {
          c.ok = false;
          c.detail = "record refers outside the tower";
          return c;
        }
        const Rational& delta = t.deltas[rec.delta_index];
        Rational expected = 2 * delta + pow2_neg(static_cast<unsigned>(n));
        for (const LinearMap* f : {&rec.gamma, &rec.eta}) {
          auto e = embedding_check("certificate", n, i, *f, delta);
          if (!e.ok) {
            e.detail = "pair map is not a delta-embedding: " + e.detail;
            return e;
          }
        }
        auto je = embedding_check("certificate", n, i, rec.j, 0);
        if (!je.ok) {
          je.detail = "J is not an embedding: " + je.detail;
          return je;
        }
        auto values = level_distances(compose(t.links[n], rec.gamma), compose(rec.j, rec.eta));
        json vals = json::array();
        for (const auto& v : values) vals.push_back(to_string(v));
        if (values != rec.values) {
          c.ok = false;
          c.detail = "recorded values differ from the recomputed distances";
          c.witness = json{{"recomputed", vals}};
          return c;
        }
        if (rec.bound > expected) {
          c.ok = false;
          c.detail = "recorded bound exceeds 2*delta + 2^-n";
          c.witness = json{{"bound", to_string(rec.bound)}, {"expected", to_string(expected)}};
          return c;
        }
        for (std::size_t l = 0; l < values.size(); ++l)
          if (values[l] > rec.bound) {
            c.ok = false;
            c.detail = "certificate value exceeds its bound at level " + std::to_string(l);
            c.witness = json{{"level", l}, {"value", to_string(values[l])}, {"bound", to_string(rec.bound)}};
            return c;
          }
        return c;
      });

  auto results = parallel_map<TowerCheck>(jobs.size(), [&](std::size_t i) { return jobs[i](); });
  r.checks.insert(r.checks.end(), results.begin(), results.end());

  for (std::size_t n = 0; n < ns; ++n) {
    if (!is_separated(t.stages[n])) {
      auto ker = kernel_intersection(t.stages[n], (std::size_t{1} << t.stages[n].length()) - 1);
      r.checks.push_back({"separation", n, 0, false, "stage is not separated", json{{"vector", vec_json(ker.front())}}});
    } else {
      r.checks.push_back({"separation", n, 0, true, "", nullptr});
    }
    TowerCheck len{"length", n, 0, true, "", nullptr};
    if (n > 0 && t.stages[n].length() < t.stages[n - 1].length()) {
      len.ok = false;
      len.detail = "stage length decreases";
    }
    if (t.omega && t.stages[n].length() < n) {
      len.ok = false;
      len.detail = "omega mode requires length >= stage index";
    }
    if (!t.omega) {
      std::size_t lk = 0;
      for (const auto& z : t.catalog) lk = std::max(lk, z.length());
      if (t.stages[n].length() != lk) {
        len.ok = false;
        len.detail = "stage length differs from the catalog length";
      }
    }
    r.checks.push_back(len);
  }

  for (std::size_t n = 0; n < t.certificates.size(); ++n) {
    r.certificates += t.certificates[n].size();
    for (const auto& rec : t.certificates[n]) r.max_certificate = std::max(r.max_certificate, max_of(rec.values));
  }
  for (const auto& s : t.skipped) r.skipped += s.size();
  r.ok = std::all_of(r.checks.begin(), r.checks.end(), [](const TowerCheck& c) { return c.ok; });
  return r;
}

bool BackForthRecord::ok() const {
  return complete && std::all_of(deviations.begin(), deviations.end(), [](const Deviation& d) { return d.ok(); });
}

namespace {

// Checks ||f - g|| <= bound both as an operator seminorm and on each basis
// vector of the common domain.
Deviation measure(const std::string& kind, std::size_t s, std::size_t t, const LinearMap& f, const LinearMap& g,
                  const Rational& bound) {
  Deviation d{kind, s, t, 0, bound, true};
  const MultiSpace& dom = f.domain();
  auto v = max_distance(f, g, dom.length());
  if (!v) {
    d.value = bound + 1;
    d.generators_ok = false;
    return d;
  }
  d.value = *v;
  LinearMap diff = difference(f, g);
  for (std::size_t i = 0; i < dom.dim() && d.generators_ok; ++i) {
    Vec e(dom.dim(), Rational(0));
    e[i] = 1;
    Vec img = diff(e);
    for (std::size_t l = 0; l < dom.length(); ++l)
      if (diff.codomain().seminorm(l)(img) > bound * dom.seminorm(l)(e)) {
        d.generators_ok = false;
        break;
      }
  }
  return d;
}

}  // namespace

BackForthRecord back_and_forth(const Tower& a, const Tower& b, std::size_t start, std::size_t steps,
                               std::size_t max_isometries) {
  if (a.catalog != b.catalog) throw Error(ErrorKind::TowerMismatch, "towers were built from different catalogs");
  BackForthRecord rec;
  rec.start = start;
  rec.steps = steps;
  const std::size_t n = start;
  const std::size_t total = 2 * steps + 1;  // J_0, L_0, ..., L_{steps-1}, J_steps
  std::vector<LinearMap> maps;
  const Tower* tw[2] = {&a, &b};

  for (std::size_t k = 0; k < total; ++k) {
    const Tower& src = *tw[k % 2];
    const Tower& tgt = *tw[(k + 1) % 2];
    const std::size_t q = n + k + 1;
    if (q >= tgt.stages.size() || n + k >= src.stages.size()) {
      rec.reason = "towers too short for the requested steps";
      break;
    }
    const MultiSpace& from = src.stages[n + k];
    std::vector<LinearMap> cands;
    for (std::size_t j = q + 1; j-- > 0;) {
      if (tgt.stages[j].dim() != from.dim()) continue;
      LinearMap up = tgt.composite(j, q);
      for (auto& p : signed_permutation_isometries(from, tgt.stages[j], max_isometries))
        cands.push_back(compose(up, LinearMap(from, tgt.stages[j], p)));
    }
    if (cands.empty()) {
      rec.reason = "no isometric embedding of stage " + std::to_string(n + k) + " found in the other tower";
      break;
    }
    // Score: the intertwining condition this map is responsible for.
    auto score = [&](const LinearMap& m) -> std::optional<Rational> {
      if (k == 0) {
        Rational worst = 0;
        for (std::size_t c = 0; c < a.catalog.size(); ++c) {
          auto d = max_distance(compose(m, a.embeddings[n][c]), b.embeddings[q][c], a.catalog[c].length());
          if (!d) return std::nullopt;
          worst = std::max(worst, *d);
        }
        return worst;
      }
      const Tower& back = *tw[(k + 1) % 2];
      return max_distance(compose(m, maps.back()), back.composite(n + k - 1, n + k + 1),
                          back.stages[n + k - 1].length());
    };
    auto scores = parallel_map<std::optional<Rational>>(cands.size(), [&](std::size_t i) { return score(cands[i]); });
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < cands.size(); ++i)
      if (scores[i] && (!best || *scores[i] < *scores[*best])) best = i;
    if (!best) {
      rec.reason = "no candidate with a bounded deviation";
      break;
    }
    maps.push_back(cands[*best]);
  }

  for (std::size_t k = 0; k < maps.size(); ++k) (k % 2 == 0 ? rec.j : rec.l).push_back(maps[k]);
  rec.complete = maps.size() == total;

  for (std::size_t c = 0; c < a.catalog.size() && !rec.j.empty(); ++c)
    rec.deviations.push_back(measure("iv", 0, c, compose(rec.j[0], a.embeddings[n][c]), b.embeddings[n + 1][c],
                                     pow2_neg(static_cast<unsigned>(n))));
  for (std::size_t s = 0; s < rec.l.size(); ++s) {
    rec.deviations.push_back(measure("vi", s, 0, compose(rec.l[s], rec.j[s]), a.composite(n + 2 * s, n + 2 * s + 2),
                                     pow2_neg(static_cast<unsigned>(n + 2 * s + 1))));
    if (s + 1 < rec.j.size())
      rec.deviations.push_back(measure("v", s, 0, compose(rec.j[s + 1], rec.l[s]),
                                       b.composite(n + 2 * s + 1, n + 2 * s + 3),
                                       pow2_neg(static_cast<unsigned>(n + 2 * s))));
  }
  for (std::size_t s = 0; s + 1 < rec.j.size(); ++s) {
    for (std::size_t t = 1; s + t < rec.j.size(); ++t) {
      LinearMap lhs = compose(rec.j[s + t], a.composite(n + 2 * s, n + 2 * s + 2 * t));
      LinearMap rhs = compose(b.composite(n + 2 * s + 1, n + 2 * s + 2 * t + 1), rec.j[s]);
      if (t == 1) rec.deviations.push_back(measure("gap", s, t, lhs, rhs, 3 * pow2_neg(static_cast<unsigned>(n + 2 * s + 1))));
      rec.deviations.push_back(measure("tail", s, t, lhs, rhs, 3 * pow2_neg(static_cast<unsigned>(n + 2 * s))));
      if (s == 0 && n >= 2)
        rec.deviations.push_back(measure("cauchy", s, t, lhs, rhs, pow2_neg(static_cast<unsigned>(n - 2))));
    }
  }
  return rec;
}

json to_json(const TowerReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json j{{"kind", c.kind}, {"stage", c.stage}, {"item", c.item}, {"ok", c.ok}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    if (!c.witness.is_null()) j["witness"] = c.witness;
    checks.push_back(j);
  }
  return json{{"format", io::kFormat},
              {"kind", "towerReport"},
              {"ok", r.ok},
              {"certificates", r.certificates},
              {"skipped", r.skipped},
              {"maxCertificate", to_string(r.max_certificate)},
              {"checks", checks}};
}

json to_json(const BackForthRecord& r) {
  json devs = json::array();
  for (const auto& d : r.deviations)
    devs.push_back(json{{"kind", d.kind},
                        {"s", d.s},
                        {"t", d.t},
                        {"value", to_string(d.value)},
                        {"bound", to_string(d.bound)},
                        {"generatorsOk", d.generators_ok},
                        {"ok", d.ok()}});
  json js = json::array(), ls = json::array();
  for (const auto& m : r.j) js.push_back(io::to_json(m.matrix()));
  for (const auto& m : r.l) ls.push_back(io::to_json(m.matrix()));
  json out{{"format", io::kFormat}, {"kind", "backForth"}, {"start", r.start},   {"steps", r.steps},
           {"complete", r.complete}, {"ok", r.ok()},        {"J", js},           {"L", ls},
           {"deviations", devs}};
  if (!r.reason.empty()) out["reason"] = r.reason;
  return out;
}

namespace {

std::string file(const char* stem, std::size_t i) { return std::string(stem) + "_" + std::to_string(i) + ".json"; }

json source_json(const SourceRef& s) { return json{{"catalog", s.catalog}, {"index", s.index}}; }

SourceRef source_from(const json& j) {
  if (!j.is_object() || !j.contains("catalog") || !j.contains("index") || !j.at("catalog").is_boolean() ||
      !j.at("index").is_number_integer() || j.at("index").get<long long>() < 0)
    throw Error(ErrorKind::Format, "malformed pair source");
  return {j.at("catalog").get<bool>(), j.at("index").get<std::size_t>()};
}

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::Format, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::size_t need_count(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) throw Error(ErrorKind::Format, std::string(key) + " must be a non-negative integer");
  return v.get<std::size_t>();
}

DischargeMethod method_from(const std::string& s) {
  for (auto m : {DischargeMethod::Link, DischargeMethod::Automorphism, DischargeMethod::Amalgam})
    if (name(m) == s) return m;
  throw Error(ErrorKind::Format, "unknown discharge method " + s);
}

}  // namespace

void save_tower(const Tower& t, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json deltas = json::array();
  for (const auto& d : t.deltas) deltas.push_back(to_string(d));
  io::write_json(dir / "manifest.json", json{{"format", io::kFormat},
                                             {"kind", "tower"},
                                             {"stages", t.stages.size()},
                                             {"catalog", t.catalog.size()},
                                             {"omega", t.omega},
                                             {"seed", t.seed},
                                             {"deltas", deltas}});
  for (std::size_t m = 0; m < t.catalog.size(); ++m) io::write_json(dir / file("catalog", m), io::to_json(t.catalog[m]));
  for (std::size_t n = 0; n < t.stages.size(); ++n) {
    io::write_json(dir / file("stage", n), io::to_json(t.stages[n]));
    json emb = json::array();
    for (const auto& e : t.embeddings[n]) emb.push_back(io::to_json(e.matrix()));
    io::write_json(dir / file("embeddings", n), json{{"format", io::kFormat}, {"kind", "embeddings"}, {"matrices", emb}});
  }
  for (std::size_t n = 0; n < t.links.size(); ++n) {
    io::write_json(dir / file("link", n), json{{"format", io::kFormat},
                                               {"kind", "map"},
                                               {"domainRef", file("stage", n)},
                                               {"codomainRef", file("stage", n + 1)},
                                               {"matrix", io::to_json(t.links[n].matrix())}});
    json pairs = json::array(), skipped = json::array();
    for (const auto& r : t.certificates[n]) {
      json vals = json::array();
      for (const auto& v : r.values) vals.push_back(to_string(v));
      pairs.push_back(json{{"source", source_json(r.source)},
                           {"deltaIndex", r.delta_index},
                           {"gamma", io::to_json(r.gamma.matrix())},
                           {"eta", io::to_json(r.eta.matrix())},
                           {"J", io::to_json(r.j.matrix())},
                           {"values", vals},
                           {"bound", to_string(r.bound)},
                           {"method", std::string(name(r.method))}});
    }
    for (const auto& s : t.skipped[n])
      skipped.push_back(json{{"source", source_json(s.source)},
                             {"deltaIndex", s.delta_index},
                             {"gamma", io::to_json(s.gamma.matrix())},
                             {"eta", io::to_json(s.eta.matrix())},
                             {"reason", s.reason}});
    io::write_json(dir / file("certificates", n), json{{"format", io::kFormat},
                                                       {"kind", "certificates"},
                                                       {"stage", n},
                                                       {"eps", to_string(pow2_neg(static_cast<unsigned>(n)))},
                                                       {"pairs", pairs},
                                                       {"skipped", skipped}});
  }
}

Tower load_tower(const std::filesystem::path& dir) {
  json man = io::read_json(dir / "manifest.json");
  if (!man.contains("kind") || man.at("kind") != "tower") throw Error(ErrorKind::Format, "not a tower manifest");
  if (man.contains("format") && man.at("format") != io::kFormat) throw Error(ErrorKind::Format, "unsupported format tag");
  Tower t;
  const std::size_t ns = need_count(man, "stages"), nc = need_count(man, "catalog");
  if (ns == 0 || nc == 0) throw Error(ErrorKind::Format, "empty tower");
  t.omega = need(man, "omega").get<bool>();
  t.seed = need(man, "seed").get<std::uint64_t>();
  for (const auto& d : need(man, "deltas")) t.deltas.push_back(io::rational_from_json(d));
  for (std::size_t m = 0; m < nc; ++m) t.catalog.push_back(io::load_space(dir / file("catalog", m)));
  for (std::size_t n = 0; n < ns; ++n) t.stages.push_back(io::load_space(dir / file("stage", n)));
  for (std::size_t n = 0; n < ns; ++n) {
    json ej = io::read_json(dir / file("embeddings", n));
    const json& mats = need(ej, "matrices");
    if (!mats.is_array() || mats.size() != nc) throw Error(ErrorKind::Format, "embedding count differs from catalog");
    std::vector<LinearMap> emb;
    for (std::size_t m = 0; m < nc; ++m)
      emb.push_back(LinearMap(t.catalog[m], t.stages[n],
                              io::matrix_from_json(mats[m], t.stages[n].dim(), t.catalog[m].dim())));
    t.embeddings.push_back(std::move(emb));
  }
  for (std::size_t n = 0; n + 1 < ns; ++n) {
    t.links.push_back(io::load_map(dir / file("link", n)));
    if (!(t.links.back().domain() == t.stages[n]) || !(t.links.back().codomain() == t.stages[n + 1]))
      throw Error(ErrorKind::Format, "link " + std::to_string(n) + " does not connect consecutive stages");
    json cj = io::read_json(dir / file("certificates", n));
    const MultiSpace& xn = t.stages[n];
    const MultiSpace& next = t.stages[n + 1];
    std::vector<PairRecord> recs;
    for (const auto& p : need(cj, "pairs")) {
      PairRecord r;
      r.source = source_from(need(p, "source"));
      r.delta_index = need_count(p, "deltaIndex");
      const MultiSpace& src = t.source_space(r.source);
      r.gamma = LinearMap(src, xn, io::matrix_from_json(need(p, "gamma"), xn.dim(), src.dim()));
      r.eta = LinearMap(src, xn, io::matrix_from_json(need(p, "eta"), xn.dim(), src.dim()));
      r.j = LinearMap(xn, next, io::matrix_from_json(need(p, "J"), next.dim(), xn.dim()));
      for (const auto& v : need(p, "values")) r.values.push_back(io::rational_from_json(v));
      r.bound = io::rational_from_json(need(p, "bound"));
      r.method = method_from(need(p, "method").get<std::string>());
      recs.push_back(std::move(r));
    }
    std::vector<SkippedPair> skipped;
    for (const auto& p : need(cj, "skipped")) {
      SkippedPair s;
      s.source = source_from(need(p, "source"));
      s.delta_index = need_count(p, "deltaIndex");
      const MultiSpace& src = t.source_space(s.source);
      s.gamma = LinearMap(src, xn, io::matrix_from_json(need(p, "gamma"), xn.dim(), src.dim()));
      s.eta = LinearMap(src, xn, io::matrix_from_json(need(p, "eta"), xn.dim(), src.dim()));
      s.reason = need(p, "reason").get<std::string>();
      skipped.push_back(std::move(s));
    }
    t.certificates.push_back(std::move(recs));
    t.skipped.push_back(std::move(skipped));
  }
  return t;
}

}  // namespace msn
