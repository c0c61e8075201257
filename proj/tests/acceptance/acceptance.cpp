// Acceptance suite: one PASS/FAIL line per criterion, exact tolerances.

#include "generators.hpp"
#include "msn/amalgam.hpp"
#include "msn/error.hpp"
#include "msn/io.hpp"
#include "msn/parallel.hpp"
#include "msn/ramsey.hpp"
#include "msn/tower.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace msn;

namespace {

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

struct Verdict {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;  // informational lines, never affect the verdict
};

class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++total_;
    if (!ok) {
      ++failed_;
      if (first_.empty()) first_ = what;
    }
  }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::string s = std::to_string(total_ - failed_) + "/" + std::to_string(total_) + " checks";
    if (!first_.empty()) s += "; first failure: " + first_;
    return s;
  }

 private:
  std::size_t total_ = 0, failed_ = 0;
  std::string first_;
};

std::size_t max_functionals(const MultiSpace& x) {
  std::size_t m = 0;
  for (const auto& s : x.seminorms()) m = std::max(m, s.functionals().size());
  return m;
}

Vec concat(const Vec& a, const Vec& b) {
  Vec out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

const Rational kEps1 = q(1, 8);

// Seeded spans for criteria 1, 2 and 9: dims <= 3, lengths <= 3 and at most
// six functionals per seminorm.
std::vector<gen::Span> criterion1_spans(std::size_t per_delta) {
  gen::Rng rng(1001);
  std::vector<gen::Span> out;
  for (const Rational& delta : {Rational(0), q(1, 4)}) {
    std::size_t made = 0;
    while (made < per_delta) {
      auto s = gen::random_span(rng, delta, false);
      if (max_functionals(s.x) > 6 || max_functionals(s.y) > 6 || max_functionals(s.z) > 6) continue;
      out.push_back(s);
      ++made;
    }
  }
  return out;
}

std::vector<AmalgamResult> run_pushouts(const std::vector<gen::Span>& spans) {
  return parallel_map<AmalgamResult>(spans.size(), [&](std::size_t i) {
    const auto& s = spans[i];
    return pushout_nap(s.x, s.y, s.z, s.f, s.g, s.delta, kEps1);
  });
}

std::string dump_all(const std::vector<AmalgamResult>& rs) {
  std::string out;
  for (const auto& r : rs) out += io::dump(io::to_json(r));
  return out;
}

Verdict criterion1(const std::vector<gen::Span>& spans, const std::vector<AmalgamResult>& results) {
  Tally t;
  std::size_t by_delta[2] = {0, 0};
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    const auto& r = results[i];
    const std::string tag = "triple " + std::to_string(i);
    ++by_delta[s.delta == 0 ? 0 : 1];
    t.check(is_embedding(r.leg_y, 0).ok, tag + " legY not isometric");
    t.check(is_embedding(r.leg_z, 0).ok, tag + " legZ not isometric");
    t.check(r.certificate.size() == s.x.length(), tag + " certificate length");
    const Rational bound = 2 * s.delta + kEps1;
    for (std::size_t n = 0; n < r.certificate.size(); ++n) {
      t.check(r.certificate[n] <= bound, tag + " level " + std::to_string(n) + " above 2delta+eps");
      auto d = map_distance(compose(r.leg_y, s.f), compose(r.leg_z, s.g), n);
      t.check(d.value && *d.value == r.certificate[n], tag + " certificate differs from recomputed distance");
    }
  }
  return {t.ok(), std::to_string(spans.size()) + " triples (" + std::to_string(by_delta[0]) + " with delta=0, " +
                      std::to_string(by_delta[1]) + " with delta=1/4), eps=1/8; " + t.summary()};
}

Verdict criterion2(const std::vector<gen::Span>& spans, const std::vector<AmalgamResult>& results,
                   std::size_t instances) {
  Tally t;
  gen::Rng rng(2002);
  std::size_t literal_checked = 0, literal_mismatch = 0;
  for (std::size_t i = 0; i < instances && i < spans.size(); ++i) {
    const auto& s = spans[i * (spans.size() / instances)];
    const auto& r = results[i * (spans.size() / instances)];
    const Rational c = pushout_constant(s.delta, kEps1);
    for (int k = 0; k < 100; ++k) {
      const std::size_t n = static_cast<std::size_t>(rng.range(0, static_cast<long>(s.x.length()) - 1));
      Vec u = rng.vec(s.y.dim(), 5), v = rng.vec(s.z.dim(), 5);
      const Rational dual = r.w.seminorm(n)(concat(u, v));
      t.check(dual == pushout_primal_value(s.f, s.g, n, c, u, v),
              "instance " + std::to_string(i) + " level " + std::to_string(n));
      if (s.delta > 0) {
        ++literal_checked;
        if (dual != pushout_primal_value(s.f, s.g, n, s.delta + kEps1, u, v)) ++literal_mismatch;
      }
    }
  }
  Verdict out{t.ok(), std::to_string(instances) + " instances x 100 vectors, dual ball vs primal LP; " + t.summary()};
  out.notes.push_back("criterion 2 info: with the literal constant delta+eps instead of (2delta+delta^2+eps)/(1+delta), " +
                      std::to_string(literal_mismatch) + "/" + std::to_string(literal_checked) +
                      " delta=1/4 evaluations differ (delta=0 instances coincide)");
  return out;
}

// Independent kernel-invariant oracle: dim of a kernel intersection is dim X
// minus the rank of the stacked functionals.
std::vector<std::size_t> alpha_oracle(const MultiSpace& x) {
  std::vector<std::size_t> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << x.length()); ++mask) {
    std::vector<Vec> rows;
    for (std::size_t k = 0; k < x.length(); ++k)
      if (mask >> k & 1)
        for (const auto& f : x.seminorm(k).functionals()) rows.push_back(f);
    out.push_back(x.dim() - (rows.empty() ? 0 : rank(Matrix::from_rows(rows, x.dim()))));
  }
  return out;
}

Verdict criterion3() {
  Tally t;
  gen::Rng rng(3003);
  std::size_t equal = 0, different = 0;
  for (int it = 0; it < 120; ++it) {
    const std::size_t d = static_cast<std::size_t>(rng.range(1, 3));
    const std::size_t len = static_cast<std::size_t>(rng.range(1, 3));
    MultiSpace x = gen::random_space(rng, d, len, false, 3);
    MultiSpace y;
    if (it % 2 == 0) {
      // Same invariant: pull x back along a random invertible matrix.
      Matrix a = gen::random_injective(rng, d, d);
      std::vector<Seminorm> seq;
      for (const auto& s : x.seminorms()) seq.push_back(pullback(s, a));
      y = MultiSpace(d, std::move(seq));
    } else {
      // Single functionals give kernels, so these invariants often differ.
      y = gen::random_space(rng, d, len, false, it % 4 == 1 ? 1 : 3);
    }
    const auto ax = alpha_oracle(x), ay = alpha_oracle(y);
    t.check(invariant_alpha(x).alpha == ax, "invariant of pair " + std::to_string(it));
    const bool same = ax == ay;
    (same ? equal : different)++;
    auto fwd = build_iso_from_invariant(x, y, static_cast<std::uint64_t>(it));
    auto bwd = build_iso_from_invariant(y, x, static_cast<std::uint64_t>(it));
    t.check(fwd.iso.has_value() == same, "forward direction, pair " + std::to_string(it));
    t.check(bwd.iso.has_value() == same, "backward direction, pair " + std::to_string(it));
    if (fwd.iso) {
      const Matrix& h = fwd.iso->matrix();
      t.check(determinant(h) != 0, "iso not invertible");
      LinearMap inv(y, x, inverse(h));
      t.check(multi_bounded_norm(*fwd.iso).has_value() && multi_bounded_norm(inv).has_value(),
              "iso not multi-bounded both ways, pair " + std::to_string(it));
    }
  }
  return {t.ok(), "120 pairs (" + std::to_string(equal) + " equal invariants, " + std::to_string(different) +
                      " different), both directions; " + t.summary()};
}

Verdict criterion4() {
  Tally t;
  gen::Rng rng(4004);
  for (int it = 0; it < 100; ++it) {
    const Rational delta = it % 2 ? q(1, 4) : Rational(0);
    auto s = gen::random_span(rng, delta, true);
    AmalgamResult r;
    try {
      r = pushout_nap(s.x, s.y, s.z, s.f, s.g, delta, kEps1, {true, false, true});
    } catch (const Error& e) {
      t.check(false, "instance " + std::to_string(it) + " threw " + std::string(name(e.kind())));
      continue;
    }
    const auto& seq = r.w.seminorms();
    for (std::size_t n = 0; n + 1 < seq.size(); ++n)
      t.check(dominated(seq[n], seq[n + 1]), "instance " + std::to_string(it) + " level " + std::to_string(n));
    t.check(!graded_violation(seq).has_value(), "graded violation, instance " + std::to_string(it));
    t.check(r.w.graded(), "graded flag, instance " + std::to_string(it));
  }
  return {t.ok(), "100 graded spans in graded mode, dual-ball containment per level; " + t.summary()};
}

std::vector<MultiSpace> two_catalog() { return {MultiSpace::linf(1), MultiSpace::linf(2)}; }

TowerOptions criterion5_options() {
  TowerOptions o;
  o.stages = 6;
  o.seed = 5;
  o.deltas = {Rational(0)};
  o.max_dim = 6;
  return o;
}

Verdict check_tower(const Tower& t, Tally& tally) {
  auto report = verify_tower(t);
  tally.check(report.ok, "verifyTower reported failures");
  std::size_t records = 0;
  for (std::size_t n = 0; n < t.certificates.size(); ++n) {
    const Rational two_n = Rational(1) / Rational(mpz_class(1) << static_cast<unsigned>(n));
    for (const auto& rec : t.certificates[n]) {
      ++records;
      const Rational delta = t.deltas.at(rec.delta_index);
      tally.check(rec.bound <= 2 * delta + two_n, "bound above 2delta_k + 2^-n at stage " + std::to_string(n));
      tally.check(rec.bound <= 2 * two_n + two_n || delta > two_n,
                  "bound above 3*2^-n at stage " + std::to_string(n));
      for (const auto& v : rec.values) tally.check(v <= rec.bound, "value above bound at stage " + std::to_string(n));
    }
  }
  for (std::size_t n = 0; n < t.embeddings.size(); ++n) {
    tally.check(t.embeddings[n].size() == t.catalog.size(), "missing catalog embedding at stage " + std::to_string(n));
    for (const auto& e : t.embeddings[n])
      tally.check(is_embedding(e, 0).ok, "catalog embedding fails at stage " + std::to_string(n));
  }
  std::size_t skipped = 0;
  for (const auto& s : t.skipped) skipped += s.size();
  std::string dims;
  for (const auto& x : t.stages) dims += (dims.empty() ? "" : ",") + std::to_string(x.dim());
  return {tally.ok(), std::to_string(t.stages.size()) + " stages (dims " + dims + "), " + std::to_string(records) +
                          " certified pairs, " + std::to_string(skipped) + " skipped"};
}

Verdict criterion5(const Tower& t) {
  Tally tally;
  Verdict v = check_tower(t, tally);
  v.detail += "; " + tally.summary();
  TowerOptions o = criterion5_options();
  o.deltas = {Rational(0), q(1, 4)};
  Tower mixed = build_tower(two_catalog(), o);
  Tally info;
  Verdict m = check_tower(mixed, info);
  v.notes.push_back("criterion 5 info: deltas {0, 1/4}: " + m.detail + "; per-pair bound 2delta_k+2^-n: " +
                    info.summary());
  return v;
}

Verdict criterion6() {
  TowerOptions o;
  o.stages = 9;
  o.deltas = {Rational(0)};
  o.sphere_pairs = false;
  o.seed = 11;
  Tower a = build_tower(two_catalog(), o);
  o.seed = 12;
  Tower b = build_tower(two_catalog(), o);
  auto r = back_and_forth(a, b, 3, 2);
  Tally t;
  t.check(r.complete, "chain incomplete: " + r.reason);
  bool gap30 = false, tail31 = false;
  Rational worst = 0;
  for (const auto& d : r.deviations) {
    t.check(d.ok(), d.kind + " s=" + std::to_string(d.s) + " t=" + std::to_string(d.t) + " value " +
                        to_string(d.value) + " > bound " + to_string(d.bound));
    if (d.kind == "gap" && d.s == 0) {
      gap30 = true;
      t.check(d.bound == q(3, 16), "gap (3,0) bound is " + to_string(d.bound));
    }
    if (d.kind == "tail" && d.s == 1) {
      tail31 = true;
      t.check(d.bound == q(3, 32), "tail (3,1) bound is " + to_string(d.bound));
    }
    worst = std::max(worst, d.value);
  }
  t.check(gap30, "no successive deviation at (3,0)");
  t.check(tail31, "no tail gap at (3,1)");
  std::size_t grew = 0;
  for (std::size_t n = 1; n < a.stages.size(); ++n) grew += a.stages[n].dim() != a.stages[n - 1].dim();
  Verdict v{t.ok(), "seeds 11/12, 9 stages, start 3, 2 rounds, " + std::to_string(r.deviations.size()) +
                        " deviations, max " + to_string(worst) + ", stages that grew: " + std::to_string(grew) + "; " +
                        t.summary()};
  // Towers that grow by sphere pairs are not isometric stage by stage.
  TowerOptions g;
  g.stages = 9;
  g.max_dim = 6;
  g.seed = 1;
  Tower ga = build_tower(two_catalog(), g);
  g.seed = 2;
  Tower gb = build_tower(two_catalog(), g);
  auto gr = back_and_forth(ga, gb, 3, 2);
  std::string status = gr.complete ? (gr.ok() ? "complete, within bounds" : "complete, bound exceeded")
                                   : "truncated (" + gr.reason + ")";
  v.notes.push_back("criterion 6 info: growing twin towers (sphere pairs, seeds 1/2): " + status + ", " +
                    std::to_string(gr.deviations.size()) + " deviations recorded");
  return v;
}

Verdict criterion7() {
  Tally t;
  gen::Rng rng(7007);
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t len = static_cast<std::size_t>(rng.range(1, 3));
    auto pi = gen::random_product_instance(rng, len);
    MultiSpace z = product_space(pi.zs, ProductMode::Coordinate);
    LinearMap rho(pi.y, z, pi.rho);
    t.check(is_embedding(rho, 0).ok, "rho not an embedding, instance " + std::to_string(inst));
    auto etas = build_net(pi.x, pi.y, q(1, 2)).points;
    // A continuous and a discrete colouring of Emb(X, Z).
    Colouring cont = distance_to(compose(rho, etas.front()), len);
    Colouring disc;
    disc.kind = ColouringKind::Discrete;
    disc.colours = 3;
    disc.evaluator = [](const LinearMap& phi) {
      long s = 0;
      for (std::size_t r = 0; r < phi.matrix().rows(); ++r) s += phi.matrix()(r, 0) > 0 ? long(r + 1) : 0;
      return Rational(s % 3);
    };
    auto pc = product_colouring(cont, pi.x, pi.zs);
    auto pd = product_colouring(disc, pi.x, pi.zs);
    for (int k = 0; k < 20; ++k) {
      const auto& eta = etas[static_cast<std::size_t>(rng.range(0, static_cast<long>(etas.size()) - 1))];
      std::vector<LinearMap> blocks;
      for (std::size_t j = 0; j < len; ++j)
        blocks.push_back(LinearMap(pc.level_space(j), pi.zs[j], pi.rho_blocks[j] * eta.matrix()));
      LinearMap composite = compose(rho, eta);
      const std::string tag = "instance " + std::to_string(inst) + " draw " + std::to_string(k);
      t.check(pc.assemble(blocks).matrix() == composite.matrix(), tag + " F differs from rho.eta");
      t.check(cont(composite) == pc(blocks), tag + " continuous identity");
      t.check(disc(composite) == pd(blocks), tag + " discrete identity");
    }
  }
  return {t.ok(), "50 instances x 20 eta, continuous and discrete colourings; " + t.summary()};
}

Verdict criterion8() {
  const MultiSpace line = MultiSpace::linf(1);
  LinearMap id(line, line, Matrix::identity(1));
  const Rational eps = q(1, 2);
  auto amalgam = pushout_nap(line, line, line, id, id, 0, eps);
  const MultiSpace& z = amalgam.w;
  auto net_xz = build_net_uniform(line, z, 2);
  auto net_xy = build_net(line, line, eps / 4);
  auto fine = build_net(line, z, eps / 4);
  std::vector<LinearMap> candidates{amalgam.leg_y, amalgam.leg_z};
  for (const auto& p : fine.points) candidates.push_back(p.retarget(line, z));
  auto table = coverage_table(net_xz, net_xy, candidates, eps);
  CoverageTable legs_only;
  legs_only.near = {table.near[0], table.near[1]};

  Tally t;
  const std::size_t n = net_xz.points.size();
  t.check(n <= 12, "net has " + std::to_string(n) + " points");
  std::size_t found = 0, legs_found = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> colours(n);
    for (std::size_t p = 0; p < n; ++p) colours[p] = mask >> p & 1;
    if (search_monochromatic(colours, 2, legs_only)) ++legs_found;
    auto w = search_monochromatic(colours, 2, table);
    t.check(w.has_value(), "no witness for colouring " + std::to_string(mask));
    if (!w) continue;
    ++found;
    // Independent coverage re-check on image vectors with the amalgam seminorm.
    const Matrix& g = candidates[w->candidate].matrix();
    for (const auto& eta : net_xy.points) {
      Vec xi = g.apply(eta.matrix().column(0));
      bool covered = false;
      for (std::size_t p = 0; p < n && !covered; ++p)
        covered = colours[p] == w->colour && z.seminorm(0)(sub(xi, net_xz.points[p].matrix().column(0))) <= eps;
      t.check(covered, "witness for colouring " + std::to_string(mask) + " fails the re-check");
    }
  }
  Verdict v{t.ok(), std::to_string(n) + "-point net (certified density " + to_string(net_xz.resolution) + "), " +
                        std::to_string(std::size_t{1} << n) + " colourings, " + std::to_string(candidates.size()) +
                        " candidates, witnesses " + std::to_string(found) + "; " + t.summary()};
  v.notes.push_back("criterion 8 info: the face-enumerated net of spacing eps/4 = 1/8 has " + std::to_string(fine.points.size()) +
                    " points (certified density " + to_string(fine.resolution) + "); with candidates {legY, legZ} only, " +
                    std::to_string(legs_found) + "/" + std::to_string(std::size_t{1} << n) + " colourings get a witness");
  return v;
}

std::string slurp_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string out;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out += f.filename().string() + "\n" + ss.str();
  }
  return out;
}

Verdict criterion9(const std::vector<gen::Span>& spans, const std::string& crit1_dump_1thread) {
  Tally t;
  set_thread_count(8);
  t.check(dump_all(run_pushouts(spans)) == crit1_dump_1thread, "criterion 1 outputs differ between 1 and 8 threads");
  Tower t8 = build_tower(two_catalog(), criterion5_options());
  set_thread_count(1);
  Tower t1 = build_tower(two_catalog(), criterion5_options());
  const auto root = std::filesystem::temp_directory_path() / "msn_acceptance";
  std::filesystem::remove_all(root);
  save_tower(t1, root / "t1");
  save_tower(t8, root / "t8");
  t.check(slurp_dir(root / "t1") == slurp_dir(root / "t8"), "criterion 5 tower files differ between 1 and 8 threads");
  Tower back = load_tower(root / "t1");
  t.check(back == t1, "tower round trip");
  save_tower(back, root / "t1b");
  t.check(slurp_dir(root / "t1b") == slurp_dir(root / "t1"), "tower re-save not byte-identical");

  std::size_t files = 0;
  for (std::size_t i = 0; i < spans.size(); i += 10) {
    const auto& s = spans[i];
    for (const MultiSpace* x : {&s.x, &s.y, &s.z}) {
      io::write_json(root / "space.json", io::to_json(*x));
      MultiSpace y = io::load_space(root / "space.json");
      t.check(y == *x, "space round trip");
      t.check(io::dump(io::to_json(y)) == io::dump(io::to_json(*x)), "space re-save");
      ++files;
    }
    for (const LinearMap* f : {&s.f, &s.g}) {
      io::write_json(root / "map.json", io::to_json(*f));
      t.check(io::load_map(root / "map.json") == *f, "map round trip");
      ++files;
    }
  }
  std::filesystem::remove_all(root);
  return {t.ok(), "criterion 1 and 5 outputs byte-identical across 1/8 threads; " + std::to_string(files) +
                      " space/map files and a tower directory round-tripped; " + t.summary()};
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  bool all = true;
  auto report = [&](int number, const std::function<Verdict()>& run) {
    const auto t0 = clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    std::ostringstream line;
    line.precision(2);
    line << std::fixed << "criterion " << number << ": " << (v.pass ? "PASS" : "FAIL") << " | " << v.detail << " ["
         << secs << " s]";
    std::cout << line.str() << "\n";
    for (const auto& n : v.notes) std::cout << "  " << n << "\n";
    std::cout.flush();
    all = all && v.pass;
  };

  set_thread_count(1);
  const auto spans = criterion1_spans(100);
  std::vector<AmalgamResult> results;
  std::string dump1;
  report(1, [&] {
    results = run_pushouts(spans);
    dump1 = dump_all(results);
    return criterion1(spans, results);
  });
  report(2, [&] { return criterion2(spans, results, 50); });
  report(3, [] { return criterion3(); });
  report(4, [] { return criterion4(); });
  report(5, [] { return criterion5(build_tower(two_catalog(), criterion5_options())); });
  report(6, [] { return criterion6(); });
  report(7, [] { return criterion7(); });
  report(8, [] { return criterion8(); });
  report(9, [&] { return criterion9(spans, dump1); });
  std::cout << (all ? "all criteria passed" : "some criteria failed") << "\n";
  return all ? 0 : 1;
}
