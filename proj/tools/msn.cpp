// msn: command-line front end. Results are JSON on stdout (and under --out
// when given); failures are JSON on stderr. Exit codes: 0 success, 1 input or
// I/O error, 2 mathematical failure with a witness.

#include "msn/amalgam.hpp"
#include "msn/error.hpp"
#include "msn/io.hpp"
#include "msn/linear_map.hpp"
#include "msn/parallel.hpp"
#include "msn/ramsey.hpp"
#include "msn/tower.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using msn::Error;
using msn::ErrorKind;
using msn::LinearMap;
using msn::MultiSpace;
using msn::Rational;
using nlohmann::json;

namespace {

struct Globals {
  std::string out;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

// A mathematical failure reported after the result has been printed.
struct Failure {
  std::string kind;
  std::string message;
  json witness;
};

struct Outcome {
  json result;
  std::string artifact = "result.json";
  std::optional<Failure> failure;
};

Rational rational(const std::string& text) {
  try {
    return msn::parse_rational(text);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Format, "not a rational: " + text);
  }
}

std::vector<Rational> rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(rational(item));
  if (out.empty()) throw Error(ErrorKind::Format, "empty rational list");
  return out;
}

json optional_rational(const std::optional<Rational>& q) {
  return q ? json(msn::to_string(*q)) : json("infinite");
}

json vec_json(const msn::Vec& v) { return msn::io::to_json(v); }

json embedding_witness(const msn::EmbeddingCheck& c) {
  return json{{"failure", std::string(msn::name(c.kind))},
              {"level", c.level},
              {"vector", vec_json(c.witness)},
              {"ratio", msn::to_string(c.value)}};
}

// Space inspection.

Outcome space_inspect(const std::string& path) {
  MultiSpace x = msn::io::load_space(path);
  json levels = json::array();
  for (const auto& s : x.seminorms())
    levels.push_back(json{{"functionals", s.functionals().size()}, {"kernelDim", s.kernel().size()}});
  return {json{{"format", msn::io::kFormat},
               {"kind", "spaceSummary"},
               {"dim", x.dim()},
               {"length", x.length()},
               {"graded", x.graded()},
               {"gradedSequence", msn::is_graded_sequence(x.seminorms())},
               {"separated", msn::is_separated(x)},
               {"levels", levels}}};
}

Outcome space_invariant(const std::string& path) {
  MultiSpace x = msn::io::load_space(path);
  auto inv = msn::invariant_alpha(x);
  json alpha = json::object();
  for (std::size_t s = 0; s < inv.alpha.size(); ++s) alpha[msn::subset_key(s)] = inv.alpha[s];
  return {json{{"alpha", alpha}}, "invariant.json"};
}

Outcome space_quotient(const std::string& path, std::optional<std::size_t> level) {
  MultiSpace x = msn::io::load_space(path);
  if (level) {
    if (*level >= x.length()) throw Error(ErrorKind::BadLevel, "level beyond the length of the space");
    auto qn = msn::quotient_norm(x.seminorm(*level));
    return {json{{"format", msn::io::kFormat},
                 {"kind", "quotientNorm"},
                 {"projection", msn::io::to_json(qn.projection)},
                 {"norm", msn::io::to_json(MultiSpace(qn.norm.dim(), {qn.norm}))}},
            "quotient.json"};
  }
  auto sq = msn::separated_quotient(x);
  return {json{{"format", msn::io::kFormat},
               {"kind", "separatedQuotient"},
               {"projection", msn::io::to_json(sq.projection)},
               {"space", msn::io::to_json(sq.space)}},
          "quotient.json"};
}

Outcome space_graded(const std::string& path) {
  MultiSpace x = msn::io::load_space(path);
  json out{{"graded", msn::is_graded_sequence(x.seminorms())}, {"closure", msn::io::to_json(msn::graded_closure(x))}};
  if (auto v = msn::graded_violation(x.seminorms()))
    out["violation"] = json{{"level", v->level}, {"vector", vec_json(v->witness)}};
  return {out, "graded.json"};
}

// Maps.

Outcome map_check(const std::string& path, const std::string& delta) {
  LinearMap f = msn::io::load_map(path);
  auto c = msn::is_embedding(f, rational(delta));
  Outcome o{json{{"embedding", c.ok}, {"delta", delta}}, "check.json"};
  if (!c.ok) {
    o.result["witness"] = embedding_witness(c);
    o.failure = Failure{"NotAnEmbedding", "the map is not a delta-embedding", o.result["witness"]};
  }
  auto d = msn::distortion(f);
  o.result["minimalDelta"] = optional_rational(d.minimal_delta);
  return o;
}

Outcome map_distance(const std::string& a, const std::string& b) {
  LinearMap f = msn::io::load_map(a);
  LinearMap g = msn::io::load_map(b);
  json levels = json::array();
  for (std::size_t m = 0; m < f.domain().length(); ++m) {
    auto d = msn::map_distance(f, g, m);
    levels.push_back(json{{"level", m}, {"value", optional_rational(d.value)}, {"witness", vec_json(d.witness)}});
  }
  return {json{{"levels", levels}}, "distance.json"};
}

Outcome map_opnorm(const std::string& path) {
  LinearMap f = msn::io::load_map(path);
  json levels = json::array();
  const std::size_t shared = std::min(f.domain().length(), f.codomain().length());
  for (std::size_t m = 0; m < shared; ++m) {
    auto n = msn::operator_seminorm(f, m);
    levels.push_back(json{{"level", m}, {"value", optional_rational(n.value)}, {"witness", vec_json(n.witness)}});
  }
  return {json{{"levels", levels}, {"multiBounded", optional_rational(msn::multi_bounded_norm(f))}}, "opnorm.json"};
}

// Isomorphisms.

Outcome iso_build(const std::string& a, const std::string& b, std::uint64_t seed) {
  MultiSpace x = msn::io::load_space(a);
  MultiSpace y = msn::io::load_space(b);
  auto r = msn::build_iso_from_invariant(x, y, seed);
  if (!r.iso) {
    json w{{"reason", r.reason}};
    return {json{{"found", false}, {"reason", r.reason}}, "iso.json", Failure{"NoIsomorphism", r.reason, w}};
  }
  return {json{{"found", true},
               {"map", msn::io::to_json(*r.iso)},
               {"forwardNorm", optional_rational(r.forward_norm)},
               {"inverseNorm", optional_rational(r.inverse_norm)}},
          "iso.json"};
}

Outcome iso_bm(const std::string& a, const std::string& b, std::uint64_t seed) {
  MultiSpace x = msn::io::load_space(a);
  MultiSpace y = msn::io::load_space(b);
  auto u = msn::bm_upper_bound(x, y, seed);
  return {json{{"productUpperBound", optional_rational(u)}}, "bm.json"};
}

// Amalgams.

struct SpanFiles {
  std::string x, y, z, f, g, delta = "0", eps;
  bool graded = false, separated = false;
};

Outcome amalgam_push(const SpanFiles& s, bool product) {
  MultiSpace x = msn::io::load_space(s.x);
  MultiSpace y = msn::io::load_space(s.y);
  MultiSpace z = msn::io::load_space(s.z);
  LinearMap f = msn::io::load_map(s.f).retarget(x, y);
  LinearMap g = msn::io::load_map(s.g).retarget(x, z);
  auto r = product ? msn::product_amalgam(x, y, z, f, g, rational(s.delta), rational(s.eps))
                   : msn::pushout_nap(x, y, z, f, g, rational(s.delta), rational(s.eps), {s.graded, s.separated, true});
  return {msn::io::to_json(r), "amalgam.json"};
}

Outcome amalgam_multi(const std::string& ypath, const std::string& pairs_path, const std::string& eps, bool graded) {
  MultiSpace y = msn::io::load_space(ypath);
  json pj = msn::io::read_json(pairs_path);
  if (!pj.is_object() || !pj.contains("pairs") || !pj.at("pairs").is_array())
    throw Error(ErrorKind::Format, "pairs file needs a \"pairs\" array");
  const fs::path base = fs::path(pairs_path).parent_path();
  std::vector<msn::AmalgamPair> pairs;
  for (const auto& p : pj.at("pairs")) {
    if (!p.is_object() || !p.contains("x") || !p.contains("gamma") || !p.contains("eta"))
      throw Error(ErrorKind::Format, "each pair needs x, gamma and eta");
    MultiSpace x = p.at("x").is_string() ? msn::io::load_space(base / p.at("x").get<std::string>())
                                         : msn::io::space_from_json(p.at("x"));
    Rational delta = p.contains("delta") ? msn::io::rational_from_json(p.at("delta")) : Rational(0);
    pairs.push_back({x, LinearMap(x, y, msn::io::matrix_from_json(p.at("gamma"), y.dim(), x.dim())),
                     LinearMap(x, y, msn::io::matrix_from_json(p.at("eta"), y.dim(), x.dim())), delta});
  }
  auto r = msn::multi_amalgam(y, pairs, rational(eps), {graded, false, true});
  json js = json::array(), certs = json::array(), bounds = json::array();
  for (const auto& j : r.j) js.push_back(msn::io::to_json(j.matrix()));
  for (const auto& c : r.certificates) {
    json row = json::array();
    for (const auto& v : c) row.push_back(msn::to_string(v));
    certs.push_back(row);
  }
  for (const auto& b : r.bounds) bounds.push_back(msn::to_string(b));
  return {json{{"format", msn::io::kFormat},
               {"kind", "multiAmalgam"},
               {"z", msn::io::to_json(r.z)},
               {"I", msn::io::to_json(r.i.matrix())},
               {"J", js},
               {"certificates", certs},
               {"bounds", bounds}},
          "multi.json"};
}

// Towers.

std::vector<MultiSpace> load_catalog(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, "catalog directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<MultiSpace> out;
  for (const auto& f : files) out.push_back(msn::io::load_space(f));
  if (out.empty()) throw Error(ErrorKind::Format, "catalog directory holds no space files");
  return out;
}

struct TowerArgs {
  std::string catalog;
  std::size_t stages = 3;
  std::string deltas = "0";
  bool omega = false;
  std::size_t pairs = 3;
  std::size_t max_dim = 8;
  bool no_sphere = false;
};

Outcome tower_build(const TowerArgs& a, const Globals& g) {
  if (g.out.empty()) throw Error(ErrorKind::Format, "tower build needs --out DIR");
  msn::TowerOptions o;
  o.stages = a.stages;
  o.deltas = rational_list(a.deltas);
  o.seed = g.seed;
  o.omega = a.omega;
  o.pairs_per_stage = a.pairs;
  o.max_dim = a.max_dim;
  o.sphere_pairs = !a.no_sphere;
  auto t = msn::build_tower(load_catalog(a.catalog), o);
  msn::save_tower(t, g.out);
  json dims = json::array();
  for (const auto& x : t.stages) dims.push_back(x.dim());
  std::size_t certs = 0, skipped = 0;
  for (const auto& c : t.certificates) certs += c.size();
  for (const auto& s : t.skipped) skipped += s.size();
  return {json{{"stages", t.stages.size()}, {"dims", dims}, {"certificates", certs}, {"skipped", skipped}}, ""};
}

Outcome tower_verify(const std::string& dir) {
  auto r = msn::verify_tower(msn::load_tower(dir));
  Outcome o{msn::to_json(r), "report.json"};
  if (!r.ok) {
    json fails = json::array();
    for (const auto& f : r.failures()) fails.push_back(json{{"kind", f.kind}, {"stage", f.stage}, {"detail", f.detail}, {"witness", f.witness}});
    o.failure = Failure{"TowerCheckFailed", "tower verification failed", fails};
  }
  return o;
}

Outcome tower_backforth(const std::string& a, const std::string& b, std::size_t start, std::size_t steps) {
  auto r = msn::back_and_forth(msn::load_tower(a), msn::load_tower(b), start, steps);
  Outcome o{msn::to_json(r), "backforth.json"};
  if (!r.ok()) o.failure = Failure{"BackAndForthFailed", r.complete ? "a deviation exceeds its bound" : r.reason, o.result};
  return o;
}

// Ramsey.

msn::EmbeddingNet load_net(const std::string& path) { return msn::net_from_json(msn::io::read_json(path)); }

Outcome ramsey_net(const std::string& x, const std::string& y, const std::string& eps, std::size_t uniform,
                   std::size_t samples, std::uint64_t seed) {
  MultiSpace xs = msn::io::load_space(x);
  MultiSpace ys = msn::io::load_space(y);
  auto net = uniform ? msn::build_net_uniform(xs, ys, uniform) : msn::build_net(xs, ys, rational(eps), seed, samples);
  return {msn::to_json(net), "net.json"};
}

Outcome ramsey_oscillate(const std::string& net_path, const std::string& colouring, const std::string& eps) {
  auto net = load_net(net_path);
  auto c = msn::colouring_from_json(msn::io::read_json(colouring), net);
  json out{{"oscillation", msn::to_string(msn::oscillation(c, net.points, rational(eps)))}};
  if (c.kind == msn::ColouringKind::Continuous) {
    auto v = msn::lipschitz_violation(c, net.points);
    out["lipschitz"] = !v;
    if (v) {
      Outcome o{out, "oscillation.json"};
      o.failure = Failure{"NotLipschitz", "the continuous colouring violates its Lipschitz condition",
                          json{{"points", json::array({v->first, v->second})}}};
      return o;
    }
  }
  return {out, "oscillation.json"};
}

Outcome ramsey_search(const std::string& net_xz, const std::string& net_xy, const std::string& colouring,
                      const std::string& candidates, const std::string& eps) {
  auto nz = load_net(net_xz);
  auto ny = load_net(net_xy);
  auto c = msn::colouring_from_json(msn::io::read_json(colouring), nz);
  json cj = msn::io::read_json(candidates);
  if (!cj.is_object() || !cj.contains("candidates") || !cj.at("candidates").is_array())
    throw Error(ErrorKind::Format, "candidates file needs a \"candidates\" array of matrices");
  std::vector<LinearMap> cands;
  for (const auto& m : cj.at("candidates"))
    cands.push_back(LinearMap(ny.y, nz.y, msn::io::matrix_from_json(m, nz.y.dim(), ny.y.dim())));
  auto w = msn::search_monochromatic(c, nz, ny, cands, rational(eps));
  if (!w) return {json{{"found", false}, {"candidates", cands.size()}}, "search.json"};
  return {json{{"found", true},
               {"candidate", w->candidate},
               {"colour", w->colour},
               {"map", msn::io::to_json(cands[w->candidate].matrix())}},
          "search.json"};
}

Outcome ramsey_product(const std::string& x, const std::vector<std::string>& factors, const std::string& net_path,
                       const std::string& colouring, const std::string& tuples) {
  MultiSpace xs = msn::io::load_space(x);
  std::vector<MultiSpace> zs;
  for (const auto& f : factors) zs.push_back(msn::io::load_space(f));
  msn::Colouring base;
  std::optional<msn::EmbeddingNet> net;
  if (!net_path.empty()) {
    net = load_net(net_path);
    base = msn::colouring_from_json(msn::io::read_json(colouring), *net);
  }
  auto pc = msn::product_colouring(base, xs, zs);
  json out{{"z", msn::io::to_json(pc.z)}};
  if (!tuples.empty()) {
    if (!net) throw Error(ErrorKind::Format, "evaluating tuples needs --net and --colouring");
    json tj = msn::io::read_json(tuples);
    if (!tj.is_object() || !tj.contains("tuples") || !tj.at("tuples").is_array())
      throw Error(ErrorKind::Format, "tuples file needs a \"tuples\" array");
    json values = json::array();
    for (const auto& t : tj.at("tuples")) {
      if (!t.is_array() || t.size() != zs.size()) throw Error(ErrorKind::ShapeMismatch, "one matrix per level is required");
      std::vector<LinearMap> gammas;
      for (std::size_t j = 0; j < zs.size(); ++j)
        gammas.push_back(LinearMap(pc.level_space(j), zs[j], msn::io::matrix_from_json(t[j], zs[j].dim(), xs.dim())));
      values.push_back(msn::to_string(pc(gammas)));
    }
    out["values"] = values;
  }
  return {out, "product.json"};
}

json error_json(const std::string& kind, const std::string& message, const json& witness) {
  json j{{"error", kind}, {"message", message}};
  if (!witness.is_null()) j["witness"] = witness;
  return j;
}

int emit(const Outcome& o, const Globals& g) {
  std::cout << msn::io::dump(o.result);
  if (!g.out.empty() && !o.artifact.empty()) msn::io::write_json(fs::path(g.out) / o.artifact, o.result);
  if (o.failure) {
    std::cerr << error_json(o.failure->kind, o.failure->message, o.failure->witness).dump() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with multi-seminormed spaces"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--out", g.out, "Directory for JSON artifacts");
  app.add_option("--seed", g.seed, "Seed for every sampling step");
  app.add_option("--threads", g.threads, "Worker threads (speed only)");

  std::function<Outcome()> action;
  auto bind = [&](CLI::App* cmd, std::function<Outcome()> fn) { cmd->callback([&action, fn] { action = fn; }); };

  // space
  auto* space = app.add_subcommand("space", "Inspect and transform spaces")->require_subcommand(1);
  std::string space_file;
  std::optional<std::size_t> level;
  std::size_t trunc_k = 1;
  auto* s_inspect = space->add_subcommand("inspect", "Summary of a space file");
  s_inspect->add_option("space", space_file)->required();
  bind(s_inspect, [&] { return space_inspect(space_file); });
  auto* s_inv = space->add_subcommand("invariant", "Kernel invariant alpha");
  s_inv->add_option("space", space_file)->required();
  bind(s_inv, [&] { return space_invariant(space_file); });
  auto* s_quot = space->add_subcommand("quotient", "Separated quotient, or the quotient norm of one level");
  s_quot->add_option("space", space_file)->required();
  s_quot->add_option("--level", level);
  bind(s_quot, [&] { return space_quotient(space_file, level); });
  auto* s_graded = space->add_subcommand("graded", "Graded check and closure");
  s_graded->add_option("space", space_file)->required();
  bind(s_graded, [&] { return space_graded(space_file); });
  auto* s_extend = space->add_subcommand("extend", "Append a norm");
  s_extend->add_option("space", space_file)->required();
  bind(s_extend, [&] {
    return Outcome{msn::io::to_json(msn::extend_with_norm(msn::io::load_space(space_file))), "extended.json"};
  });
  auto* s_trunc = space->add_subcommand("truncate", "Keep the first k seminorms");
  s_trunc->add_option("space", space_file)->required();
  s_trunc->add_option("--k", trunc_k)->required();
  bind(s_trunc, [&] {
    return Outcome{msn::io::to_json(msn::truncate(msn::io::load_space(space_file), trunc_k)), "truncated.json"};
  });

  // map
  auto* map = app.add_subcommand("map", "Linear maps")->require_subcommand(1);
  std::string map_a, map_b, delta = "0";
  auto* m_check = map->add_subcommand("check", "Is the map a delta-embedding?");
  m_check->add_option("map", map_a)->required();
  m_check->add_option("--delta", delta);
  bind(m_check, [&] { return map_check(map_a, delta); });
  auto* m_dist = map->add_subcommand("distance", "Per-level distance between two maps");
  m_dist->add_option("f", map_a)->required();
  m_dist->add_option("g", map_b)->required();
  bind(m_dist, [&] { return map_distance(map_a, map_b); });
  auto* m_op = map->add_subcommand("opnorm", "Operator seminorms");
  m_op->add_option("map", map_a)->required();
  bind(m_op, [&] { return map_opnorm(map_a); });

  // iso
  auto* iso = app.add_subcommand("iso", "Multi-isomorphisms")->require_subcommand(1);
  std::string iso_x, iso_y;
  auto* i_build = iso->add_subcommand("build", "Isomorphism from equal kernel invariants");
  i_build->add_option("x", iso_x)->required();
  i_build->add_option("y", iso_y)->required();
  bind(i_build, [&] { return iso_build(iso_x, iso_y, g.seed); });
  auto* i_bm = iso->add_subcommand("bm", "Upper bound on the Banach-Mazur product");
  i_bm->add_option("x", iso_x)->required();
  i_bm->add_option("y", iso_y)->required();
  bind(i_bm, [&] { return iso_bm(iso_x, iso_y, g.seed); });

  // amalgam
  auto* amalgam = app.add_subcommand("amalgam", "Amalgamation")->require_subcommand(1);
  SpanFiles span;
  auto add_span = [&](CLI::App* cmd) {
    cmd->add_option("--x", span.x)->required();
    cmd->add_option("--y", span.y)->required();
    cmd->add_option("--z", span.z)->required();
    cmd->add_option("--f", span.f)->required();
    cmd->add_option("--g", span.g)->required();
    cmd->add_option("--delta", span.delta);
    cmd->add_option("--eps", span.eps)->required();
  };
  auto* a_push = amalgam->add_subcommand("push", "Pushout of a span");
  add_span(a_push);
  a_push->add_flag("--graded", span.graded);
  a_push->add_flag("--separated", span.separated);
  bind(a_push, [&] { return amalgam_push(span, false); });
  auto* a_prod = amalgam->add_subcommand("product", "Per-level product amalgam");
  add_span(a_prod);
  bind(a_prod, [&] { return amalgam_push(span, true); });
  std::string multi_y, multi_pairs, multi_eps;
  bool multi_graded = false;
  auto* a_multi = amalgam->add_subcommand("multi", "Amalgamate several pairs into one extension");
  a_multi->add_option("--y", multi_y)->required();
  a_multi->add_option("--pairs", multi_pairs)->required();
  a_multi->add_option("--eps", multi_eps)->required();
  a_multi->add_flag("--graded", multi_graded);
  bind(a_multi, [&] { return amalgam_multi(multi_y, multi_pairs, multi_eps, multi_graded); });

  // tower
  auto* tower = app.add_subcommand("tower", "Towers of spaces")->require_subcommand(1);
  TowerArgs targs;
  auto* t_build = tower->add_subcommand("build", "Build a tower over a catalog directory");
  t_build->add_option("--catalog", targs.catalog)->required();
  t_build->add_option("--stages", targs.stages);
  t_build->add_option("--deltas", targs.deltas, "Comma-separated rationals");
  t_build->add_flag("--omega", targs.omega);
  t_build->add_option("--pairs-per-stage", targs.pairs);
  t_build->add_option("--max-dim", targs.max_dim);
  t_build->add_flag("--no-sphere-pairs", targs.no_sphere);
  bind(t_build, [&] { return tower_build(targs, g); });
  std::string tower_a, tower_b;
  std::size_t bf_start = 0, bf_steps = 1;
  auto* t_verify = tower->add_subcommand("verify", "Re-check every certificate of a tower");
  t_verify->add_option("dir", tower_a)->required();
  bind(t_verify, [&] { return tower_verify(tower_a); });
  auto* t_bf = tower->add_subcommand("backforth", "Finite back-and-forth between two towers");
  t_bf->add_option("a", tower_a)->required();
  t_bf->add_option("b", tower_b)->required();
  t_bf->add_option("--start", bf_start);
  t_bf->add_option("--steps", bf_steps);
  bind(t_bf, [&] { return tower_backforth(tower_a, tower_b, bf_start, bf_steps); });

  // ramsey
  auto* ramsey = app.add_subcommand("ramsey", "Colourings of embedding sets")->require_subcommand(1);
  std::string r_x, r_y, r_eps = "1", r_net, r_net_xy, r_colouring, r_candidates, r_tuples;
  std::size_t r_uniform = 0, r_samples = 32;
  std::vector<std::string> r_factors;
  auto* r_netcmd = ramsey->add_subcommand("net", "Net of Emb(X, Y)");
  r_netcmd->add_option("--x", r_x)->required();
  r_netcmd->add_option("--y", r_y)->required();
  r_netcmd->add_option("--eps", r_eps);
  r_netcmd->add_option("--uniform", r_uniform, "Subdivisions per face instead of a spacing");
  r_netcmd->add_option("--samples", r_samples);
  bind(r_netcmd, [&] { return ramsey_net(r_x, r_y, r_eps, r_uniform, r_samples, g.seed); });
  auto* r_osc = ramsey->add_subcommand("oscillate", "Oscillation of a colouring over a net");
  r_osc->add_option("--net", r_net)->required();
  r_osc->add_option("--colouring", r_colouring)->required();
  r_osc->add_option("--eps", r_eps);
  bind(r_osc, [&] { return ramsey_oscillate(r_net, r_colouring, r_eps); });
  auto* r_search = ramsey->add_subcommand("search", "Search for a monochromatic copy");
  r_search->add_option("--net-xz", r_net)->required();
  r_search->add_option("--net-xy", r_net_xy)->required();
  r_search->add_option("--colouring", r_colouring)->required();
  r_search->add_option("--candidates", r_candidates)->required();
  r_search->add_option("--eps", r_eps)->required();
  bind(r_search, [&] { return ramsey_search(r_net, r_net_xy, r_colouring, r_candidates, r_eps); });
  auto* r_prod = ramsey->add_subcommand("product", "Product space and induced colouring");
  r_prod->add_option("--x", r_x)->required();
  r_prod->add_option("--factors", r_factors)->required();
  r_prod->add_option("--net", r_net);
  r_prod->add_option("--colouring", r_colouring);
  r_prod->add_option("--tuples", r_tuples);
  bind(r_prod, [&] { return ramsey_product(r_x, r_factors, r_net, r_colouring, r_tuples); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_json("Usage", e.what(), nullptr).dump() << "\n";
    return 1;
  }

  try {
    msn::set_thread_count(g.threads);
    if (!action) throw Error(ErrorKind::Format, "no command given");
    return emit(action(), g);
  } catch (const Error& e) {
    std::cerr << error_json(std::string(msn::name(e.kind())), e.what(), e.witness()).dump() << "\n";
    return msn::is_mathematical(e.kind()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << error_json("Internal", e.what(), nullptr).dump() << "\n";
    return 1;
  }
}
