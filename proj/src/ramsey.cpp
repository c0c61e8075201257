#include "msn/ramsey.hpp"

#include "msn/error.hpp"
#include "msn/io.hpp"
#include "msn/parallel.hpp"
#include "msn/polytope.hpp"
#include "msn/subspace.hpp"

#include <algorithm>
#include <random>

namespace msn {

using nlohmann::json;

namespace {

LinearMap column_map(const MultiSpace& x, const MultiSpace& y, const Vec& v) {
  Matrix m(y.dim(), 1);
  for (std::size_t r = 0; r < y.dim(); ++r) m(r, 0) = v[r];
  return LinearMap(x, y, m);
}

Vec column(const LinearMap& f) {
  Vec v(f.matrix().rows());
  for (std::size_t r = 0; r < v.size(); ++r) v[r] = f.matrix()(r, 0);
  return v;
}

Rational ceil_div(const Rational& a, const Rational& b) {
  Rational q = a / b;
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(c);
}

// Compositions of k into `parts` non-negative integers.
void compositions(std::size_t k, std::size_t parts, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
  if (parts == 1) {
    cur.push_back(k);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::size_t i = 0; i <= k; ++i) {
    cur.push_back(i);
    compositions(k - i, parts - 1, cur, out);
    cur.pop_back();
  }
}

struct Face {
  std::vector<Vec> vertices;
};

// Faces of the solution set {y : ||y||_{Y,m} = a_m for m < levels}.
std::vector<Face> sphere_faces(const MultiSpace& x, const MultiSpace& y) {
  const std::size_t levels = x.length();
  const std::size_t d = y.dim();
  if (levels > y.length()) throw Error(ErrorKind::EmptyEmbeddingSet, "X has more seminorms than Y");
  const Vec e{Rational(1)};
  std::vector<Rational> a(levels);
  std::vector<std::size_t> positive;
  for (std::size_t m = 0; m < levels; ++m) {
    a[m] = x.seminorm(m)(e);
    if (a[m] > 0) positive.push_back(m);
  }
  std::vector<Inequality> base;
  for (std::size_t m = 0; m < levels; ++m)
    for (const auto& psi : y.seminorm(m).functionals()) {
      base.push_back({psi, a[m]});
      base.push_back({scale(psi, Rational(-1)), a[m]});
    }
  if (positive.empty()) {
    std::vector<Vec> rows;
    for (const auto& q : base) rows.push_back(q.normal);
    if (annihilator(rows, d).empty()) throw Error(ErrorKind::EmptyEmbeddingSet, "only the zero vector satisfies the constraints");
    throw Error(ErrorKind::UnboundedPolyhedron, "the embedding set is unbounded");
  }
  std::vector<Face> faces;
  std::vector<std::vector<Vec>> seen;
  std::vector<std::size_t> pick(positive.size(), 0);
  for (;;) {
    std::vector<Inequality> ineqs = base;
    for (std::size_t i = 0; i < positive.size(); ++i) {
      const auto& fs = y.seminorm(positive[i]).functionals();
      Vec phi = fs[pick[i] / 2];
      if (pick[i] % 2) phi = scale(phi, Rational(-1));
      ineqs.push_back({scale(phi, Rational(-1)), Rational(-a[positive[i]])});
    }
    auto verts = polytope_vertices(ineqs, d);
    if (!verts.empty()) {
      std::sort(verts.begin(), verts.end(), LexLess{});
      if (std::find(seen.begin(), seen.end(), verts) == seen.end()) {
        seen.push_back(verts);
        faces.push_back({verts});
      }
    }
    std::size_t i = 0;
    for (; i < positive.size(); ++i) {
      if (++pick[i] < 2 * y.seminorm(positive[i]).functionals().size()) break;
      pick[i] = 0;
    }
    if (i == positive.size()) break;
  }
  if (faces.empty()) throw Error(ErrorKind::EmptyEmbeddingSet, "no vector has the prescribed seminorms");
  return faces;
}

Rational vector_distance(const MultiSpace& x, const MultiSpace& y, const Vec& u, const Vec& w) {
  const Vec e{Rational(1)};
  Vec diff = sub(u, w);
  Rational best = 0;
  for (std::size_t m = 0; m < x.length(); ++m) {
    Rational a = x.seminorm(m)(e);
    if (a > 0) best = std::max(best, Rational(y.seminorm(m)(diff) / a));
  }
  return best;
}

EmbeddingNet face_net(const MultiSpace& x, const MultiSpace& y, const std::function<std::size_t(const Rational&)>& parts) {
  auto faces = sphere_faces(x, y);
  std::vector<Vec> pts;
  Rational resolution = 0;
  for (const auto& f : faces) {
    const auto& vs = f.vertices;
    Rational diam = 0;
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j) diam = std::max(diam, vector_distance(x, y, vs[i], vs[j]));
    const Rational spread = vs.size() > 2 ? Rational(Rational(static_cast<long>(vs.size() - 1)) * diam) : diam;
    std::size_t k = vs.size() == 1 ? 1 : std::max<std::size_t>(1, parts(spread));
    Rational face_res = vs.size() == 1 ? Rational(0)
                        : vs.size() == 2 ? Rational(diam / (2 * Rational(static_cast<long>(k))))
                                         : Rational(Rational(static_cast<long>(vs.size() - 1)) * diam / Rational(static_cast<long>(k)));
    resolution = std::max(resolution, face_res);
    std::vector<std::vector<std::size_t>> combos;
    std::vector<std::size_t> cur;
    compositions(k, vs.size(), cur, combos);
    for (const auto& c : combos) {
      Vec p(y.dim(), Rational(0));
      for (std::size_t i = 0; i < vs.size(); ++i)
        if (c[i]) p = add(p, scale(vs[i], Rational(static_cast<long>(c[i])) / Rational(static_cast<long>(k))));
      pts.push_back(std::move(p));
    }
  }
  std::sort(pts.begin(), pts.end(), LexLess{});
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  EmbeddingNet net{x, y, {}, resolution, true};
  for (const auto& p : pts) net.points.push_back(column_map(x, y, p));
  return net;
}

}  // namespace

EmbeddingNet build_net(const MultiSpace& x, const MultiSpace& y, const Rational& spacing, std::uint64_t seed,
                       std::size_t samples) {
  if (spacing <= 0) throw Error(ErrorKind::EpsNonPositive, "net spacing must be positive");
  if (x.dim() == 1)
    return face_net(x, y, [&](const Rational& diam) {
      return static_cast<std::size_t>(ceil_div(diam, spacing).get_num().get_ui());
    });
  if (x.length() > y.length()) throw Error(ErrorKind::EmptyEmbeddingSet, "X has more seminorms than Y");
  EmbeddingNet net{x, y, {}, spacing, false};
  if (x.dim() == 0) {
    net.points.push_back(LinearMap(x, y, Matrix(y.dim(), 0)));
    net.resolution = 0;
    net.certified = true;
    return net;
  }
  if (x.dim() > y.dim()) throw Error(ErrorKind::EmptyEmbeddingSet, "dim X exceeds dim Y");
  std::mt19937_64 rng(seed);
  std::vector<Matrix> found;
  for (std::size_t attempt = 0; attempt < 16 * samples && found.size() < samples; ++attempt) {
    std::vector<std::size_t> coords(y.dim());
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
    for (std::size_t i = coords.size(); i > 1; --i) std::swap(coords[i - 1], coords[rng() % i]);
    Matrix m(y.dim(), x.dim());
    for (std::size_t c = 0; c < x.dim(); ++c) m(coords[c], c) = rng() % 2 ? 1 : -1;
    if (std::find(found.begin(), found.end(), m) != found.end()) continue;
    if (is_embedding(LinearMap(x, y, m), 0).ok) found.push_back(m);
  }
  if (found.empty()) throw Error(ErrorKind::EmptyEmbeddingSet, "no signed coordinate embedding found");
  std::sort(found.begin(), found.end(), [](const Matrix& a, const Matrix& b) {
    auto ra = a.row_list(), rb = b.row_list();
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end(), LexLess{});
  });
  for (auto& m : found) net.points.push_back(LinearMap(x, y, m));
  return net;
}

EmbeddingNet build_net_uniform(const MultiSpace& x, const MultiSpace& y, std::size_t k) {
  if (x.dim() != 1) throw Error(ErrorKind::DimensionMismatch, "uniform nets need a one-dimensional domain");
  if (k == 0) throw Error(ErrorKind::BadLength, "at least one subdivision per face");
  return face_net(x, y, [k](const Rational&) { return k; });
}

Rational embedding_distance(const LinearMap& f, const LinearMap& g) {
  Rational best = 0;
  for (std::size_t m = 0; m < f.domain().length(); ++m) {
    auto d = map_distance(f, g, m);
    if (!d.value) throw Error(ErrorKind::NotAnEmbedding, "embedding distance is unbounded");
    best = std::max(best, *d.value);
  }
  return best;
}

Rational Colouring::operator()(const LinearMap& phi) const {
  if (evaluator) return evaluator(phi);
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i].matrix() == phi.matrix()) return values[i];
  throw Error(ErrorKind::UndefinedPoint, "colouring is not defined at this embedding",
              json{{"matrix", io::to_json(phi.matrix())}});
}

Colouring table_colouring(ColouringKind kind, std::size_t colours_or_level, std::vector<LinearMap> points,
                          std::vector<Rational> values) {
  if (points.size() != values.size()) throw Error(ErrorKind::ArityMismatch, "colour table size mismatch");
  Colouring c;
  c.kind = kind;
  if (kind == ColouringKind::Discrete) {
    c.colours = colours_or_level;
    for (const auto& v : values)
      if (v < 0 || v >= Rational(static_cast<long>(c.colours)) || v.get_den() != 1)
        throw Error(ErrorKind::Format, "discrete colours must be integers in [0, r)");
  } else {
    c.level = colours_or_level;
    for (const auto& v : values)
      if (v < 0 || v > 1) throw Error(ErrorKind::Format, "continuous colours must lie in [0, 1]");
  }
  c.points = std::move(points);
  c.values = std::move(values);
  return c;
}

Colouring coordinate_clamp(std::size_t coord, std::size_t level) {
  Colouring c;
  c.kind = ColouringKind::Continuous;
  c.level = level;
  c.evaluator = [coord](const LinearMap& phi) {
    if (phi.matrix().cols() != 1 || coord >= phi.matrix().rows())
      throw Error(ErrorKind::UndefinedPoint, "coordinate clamp needs a one-dimensional domain");
    Rational t = phi.matrix()(coord, 0);
    return std::min(Rational(1), std::max(Rational(0), t));
  };
  return c;
}

Colouring distance_to(const LinearMap& centre, std::size_t level) {
  Colouring c;
  c.kind = ColouringKind::Continuous;
  c.level = level;
  c.evaluator = [centre](const LinearMap& phi) { return std::min(Rational(1), embedding_distance(phi, centre)); };
  return c;
}

Rational oscillation(const Colouring& c, const std::vector<LinearMap>& points, const Rational& eps) {
  if (points.empty()) return 0;
  std::vector<Rational> vals;
  for (const auto& p : points) vals.push_back(c(p));
  if (c.kind == ColouringKind::Continuous) {
    auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    return *hi - *lo;
  }
  for (std::size_t i = 0; i < c.colours; ++i) {
    bool covers = true;
    for (std::size_t p = 0; p < points.size() && covers; ++p) {
      bool near = false;
      for (std::size_t q = 0; q < points.size() && !near; ++q)
        near = vals[q] == Rational(static_cast<long>(i)) && embedding_distance(points[p], points[q]) <= eps;
      covers = near;
    }
    if (covers) return 0;
  }
  return 1;
}

std::optional<std::pair<std::size_t, std::size_t>> lipschitz_violation(const Colouring& c,
                                                                       const std::vector<LinearMap>& points) {
  std::vector<Rational> vals;
  for (const auto& p : points) vals.push_back(c(p));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const std::size_t levels = std::min(c.level, points[i].domain().length());
      Rational d = 0;
      for (std::size_t m = 0; m < levels; ++m) {
        auto v = map_distance(points[i], points[j], m);
        if (!v.value) {
          d = -1;
          break;
        }
        d = std::max(d, *v.value);
      }
      if (d < 0) continue;  // unbounded distance constrains nothing
      if (abs(vals[i] - vals[j]) > d) return std::make_pair(i, j);
    }
  return std::nullopt;
}

std::vector<Rational> uniform_grid(const Rational& eps) {
  if (eps <= 0) throw Error(ErrorKind::EpsNonPositive, "grid mesh must be positive");
  std::vector<Rational> d;
  for (Rational t = 0; t < 1; t += eps) d.push_back(t);
  d.push_back(1);
  return d;
}

namespace {

std::size_t nearest_index(const std::vector<Rational>& grid, const Rational& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (abs(grid[i] - v) < abs(grid[best] - v)) best = i;
  return best;
}

}  // namespace

Colouring discretize(const Colouring& c, const Rational& eps) {
  if (c.kind != ColouringKind::Continuous) throw Error(ErrorKind::Format, "discretize needs a continuous colouring");
  Colouring out;
  out.kind = ColouringKind::Discrete;
  out.palette = uniform_grid(eps);
  out.colours = out.palette.size();
  auto grid = out.palette;
  Colouring src = c;
  out.evaluator = [src, grid](const LinearMap& phi) {
    return Rational(static_cast<long>(nearest_index(grid, src(phi))));
  };
  out.points = c.points;
  for (const auto& v : c.values) out.values.push_back(Rational(static_cast<long>(nearest_index(grid, v))));
  return out;
}

Colouring bad_colouring_from_discrete(const Colouring& c) {
  if (c.kind != ColouringKind::Discrete || c.colours == 0)
    throw Error(ErrorKind::Format, "expected a discrete colouring");
  const Rational last(static_cast<long>(c.colours - 1));
  std::vector<LinearMap> red;
  for (std::size_t i = 0; i < c.points.size(); ++i)
    if (c.values[i] == last) red.push_back(c.points[i]);
  Colouring out;
  out.kind = ColouringKind::Continuous;
  out.level = c.points.empty() ? 1 : c.points.front().domain().length();
  out.evaluator = [red](const LinearMap& phi) {
    Rational best = 1;
    for (const auto& psi : red) best = std::min(best, embedding_distance(phi, psi));
    return best;
  };
  out.points = c.points;
  for (const auto& p : c.points) out.values.push_back(out.evaluator(p));
  return out;
}

MultiSpace ProductColouring::level_space(std::size_t j) const { return MultiSpace(x.dim(), {x.seminorm(j)}); }

LinearMap ProductColouring::assemble(const std::vector<LinearMap>& gammas) const {
  if (gammas.size() != zs.size()) throw Error(ErrorKind::ShapeMismatch, "one embedding per level is required");
  std::vector<Vec> rows;
  for (std::size_t j = 0; j < gammas.size(); ++j) {
    const Matrix& m = gammas[j].matrix();
    if (m.rows() != zs[j].dim() || m.cols() != x.dim())
      throw Error(ErrorKind::ShapeMismatch, "embedding " + std::to_string(j) + " has the wrong shape");
    require_embedding(LinearMap(level_space(j), zs[j], m), 0, "level " + std::to_string(j) + " embedding");
    for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
  }
  return LinearMap(x, z, Matrix::from_rows(rows, x.dim()));
}

Rational ProductColouring::operator()(const std::vector<LinearMap>& gammas) const { return base(assemble(gammas)); }

ProductColouring product_colouring(const Colouring& c, const MultiSpace& x, const std::vector<MultiSpace>& zs) {
  if (zs.size() != x.length()) throw Error(ErrorKind::ShapeMismatch, "one factor per seminorm of X is required");
  for (const auto& z : zs)
    if (z.length() != 1) throw Error(ErrorKind::ShapeMismatch, "product factors carry a single seminorm");
  return {x, zs, product_space(zs, ProductMode::Coordinate), c};
}

LinearMap QuotientLift::pad(const LinearMap& gamma) const {
  const Matrix& g = gamma.matrix();
  if (g.rows() != z.dim()) throw Error(ErrorKind::ShapeMismatch, "padding needs a map into Z");
  Matrix m(2 * z.dim(), g.cols());
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c) m(r, c) = g(r, c);
  return LinearMap(gamma.domain(), padded, m);
}

QuotientLift quotient_lift(const Colouring& c, const MultiSpace& x, const MultiSpace& z) {
  if (x.length() != 1 || z.length() != 1)
    throw Error(ErrorKind::MultiLevelInput, "only single-seminorm spaces are lifted");
  QuotientLift q;
  q.x = x;
  q.z = z;
  auto sq = separated_quotient(x);
  q.x_tilde = sq.space;
  q.pi_x = sq.projection;
  auto e = rref(sq.projection);
  q.section = Matrix(x.dim(), sq.space.dim());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) q.section(e.pivots[i], i) = 1;
  std::vector<Vec> fs;
  for (const auto& psi : z.seminorm(0).functionals()) {
    Vec f(2 * z.dim(), Rational(0));
    std::copy(psi.begin(), psi.end(), f.begin());
    fs.push_back(f);
  }
  q.padded = MultiSpace(2 * z.dim(), {Seminorm::make(2 * z.dim(), fs)}, true);
  q.base = c;
  q.lifted = c;
  q.lifted.points.clear();
  q.lifted.values.clear();
  QuotientLift frame = q;  // copied into the evaluator
  q.lifted.evaluator = [frame](const LinearMap& gamma) {
    return frame.base(compose(frame.pad(gamma), LinearMap(frame.x, frame.x_tilde, frame.pi_x)));
  };
  return q;
}

TransferCheck distance_transfer(const QuotientLift& lift, const MultiSpace& y, const LinearMap& rho,
                                const LinearMap& theta, const LinearMap& eta) {
  if (y.length() != 1) throw Error(ErrorKind::MultiLevelInput, "only single-seminorm spaces are lifted");
  auto sy = separated_quotient(y);
  LinearMap r = rho.retarget(sy.space, lift.z);
  LinearMap t = theta.retarget(lift.x_tilde, lift.z);
  LinearMap pi_x(lift.x, lift.x_tilde, lift.pi_x);
  LinearMap pi_y(y, sy.space, sy.projection);
  LinearMap phi(lift.x_tilde, sy.space, sy.projection * eta.matrix() * lift.section);
  TransferCheck out;
  out.lhs = embedding_distance(compose(compose(lift.pad(r), pi_y), eta), compose(lift.pad(t), pi_x));
  out.rhs = embedding_distance(compose(r, phi), t);
  return out;
}

CoverageTable coverage_table(const EmbeddingNet& net_xz, const EmbeddingNet& net_xy,
                             const std::vector<LinearMap>& candidates, const Rational& eps) {
  CoverageTable t;
  t.near = parallel_map<std::vector<std::vector<bool>>>(candidates.size(), [&](std::size_t k) {
    std::vector<std::vector<bool>> rows;
    for (const auto& eta : net_xy.points) {
      LinearMap xi = compose(candidates[k], eta);
      std::vector<bool> row;
      for (const auto& p : net_xz.points) row.push_back(embedding_distance(xi, p) <= eps);
      rows.push_back(std::move(row));
    }
    return rows;
  });
  return t;
}

std::optional<MonochromaticWitness> search_monochromatic(const std::vector<std::size_t>& colours, std::size_t r,
                                                         const CoverageTable& table) {
  for (std::size_t k = 0; k < table.near.size(); ++k)
    for (std::size_t i = 0; i < r; ++i) {
      bool all = true;
      for (const auto& row : table.near[k]) {
        bool hit = false;
        for (std::size_t p = 0; p < row.size() && !hit; ++p) hit = row[p] && colours[p] == i;
        if (!hit) {
          all = false;
          break;
        }
      }
      if (all) return MonochromaticWitness{k, i};
    }
  return std::nullopt;
}

std::optional<MonochromaticWitness> search_monochromatic(const Colouring& c, const EmbeddingNet& net_xz,
                                                         const EmbeddingNet& net_xy,
                                                         const std::vector<LinearMap>& candidates,
                                                         const Rational& eps) {
  if (c.kind != ColouringKind::Discrete) throw Error(ErrorKind::Format, "search needs a discrete colouring");
  for (const auto& g : candidates) require_embedding(g, 0, "candidate");
  std::vector<std::size_t> colours;
  for (const auto& p : net_xz.points) {
    Rational v = c(p);
    colours.push_back(static_cast<std::size_t>(v.get_num().get_ui()));
  }
  return search_monochromatic(colours, c.colours, coverage_table(net_xz, net_xy, candidates, eps));
}

json to_json(const EmbeddingNet& net) {
  json pts = json::array();
  for (const auto& p : net.points) pts.push_back(io::to_json(p.matrix()));
  return json{{"format", io::kFormat},
              {"kind", "net"},
              {"x", io::to_json(net.x)},
              {"y", io::to_json(net.y)},
              {"resolution", to_string(net.resolution)},
              {"certified", net.certified},
              {"points", pts}};
}

EmbeddingNet net_from_json(const json& j) {
  if (!j.is_object() || !j.contains("x") || !j.contains("y") || !j.contains("points"))
    throw Error(ErrorKind::Format, "malformed net file");
  EmbeddingNet net;
  net.x = io::space_from_json(j.at("x"));
  net.y = io::space_from_json(j.at("y"));
  net.resolution = j.contains("resolution") ? io::rational_from_json(j.at("resolution")) : Rational(0);
  net.certified = j.value("certified", false);
  for (const auto& m : j.at("points"))
    net.points.push_back(LinearMap(net.x, net.y, io::matrix_from_json(m, net.y.dim(), net.x.dim())));
  return net;
}

json colouring_to_json(const Colouring& c, const EmbeddingNet& net) {
  json values = json::object();
  for (std::size_t i = 0; i < net.points.size(); ++i) values[std::to_string(i)] = to_string(c(net.points[i]));
  json out{{"format", io::kFormat},
           {"kind", "colouring"},
           {"type", c.kind == ColouringKind::Discrete ? "discrete" : "continuous"},
           {"values", values}};
  if (c.kind == ColouringKind::Discrete) out["colours"] = c.colours;
  else out["level"] = c.level;
  return out;
}

Colouring colouring_from_json(const json& j, const EmbeddingNet& net) {
  if (!j.is_object() || !j.contains("type") || !j.contains("values") || !j.at("values").is_object())
    throw Error(ErrorKind::Format, "malformed colouring file");
  const std::string type = j.at("type").get<std::string>();
  ColouringKind kind;
  std::size_t param;
  if (type == "discrete") {
    kind = ColouringKind::Discrete;
    param = j.value("colours", std::size_t{2});
  } else if (type == "continuous") {
    kind = ColouringKind::Continuous;
    param = j.value("level", std::size_t{1});
  } else {
    throw Error(ErrorKind::Format, "unknown colouring type " + type);
  }
  std::vector<LinearMap> pts;
  std::vector<Rational> vals;
  for (const auto& [key, value] : j.at("values").items()) {
    std::size_t idx;
    try {
      idx = std::stoul(key);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Format, "colour keys are net-point indices");
    }
    if (idx >= net.points.size()) throw Error(ErrorKind::Format, "colour key beyond the net");
    pts.push_back(net.points[idx]);
    vals.push_back(io::rational_from_json(value));
  }
  return table_colouring(kind, param, std::move(pts), std::move(vals));
}

}  // namespace msn
