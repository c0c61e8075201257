#include "msn/amalgam.hpp"
#include "msn/error.hpp"
#include "msn/io.hpp"
#include "msn/linear_map.hpp"
#include "msn/parallel.hpp"
#include "msn/ramsey.hpp"
#include "msn/tower.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

namespace py = pybind11;
using nlohmann::json;

// Every value crosses the boundary as a JSON document in the msn/1 format;
// the Python package converts to and from dicts.

namespace {

json parse(const std::string& s) {
  try {
    return json::parse(s);
  } catch (const json::parse_error& e) {
    throw msn::Error(msn::ErrorKind::Format, e.what());
  }
}

msn::MultiSpace space(const std::string& s) { return msn::io::space_from_json(parse(s)); }
msn::LinearMap map(const std::string& s) { return msn::io::map_from_json(parse(s)); }
msn::Rational rational(const std::string& s) { return msn::parse_rational(s); }

std::string out(const json& j) { return j.dump(); }

std::string invariant_alpha(const std::string& x) {
  auto inv = msn::invariant_alpha(space(x));
  json alpha = json::object();
  for (std::size_t s = 0; s < inv.alpha.size(); ++s) alpha[msn::subset_key(s)] = inv.alpha[s];
  return out(alpha);
}

std::string is_embedding(const std::string& f, const std::string& delta) {
  auto c = msn::is_embedding(map(f), rational(delta));
  json j{{"ok", c.ok}};
  if (!c.ok)
    j["witness"] = json{{"failure", std::string(msn::name(c.kind))},
                        {"level", c.level},
                        {"vector", msn::io::to_json(c.witness)},
                        {"ratio", msn::to_string(c.value)}};
  return out(j);
}

std::string map_distance(const std::string& f, const std::string& g) {
  auto a = map(f), b = map(g);
  json levels = json::array();
  for (std::size_t m = 0; m < a.domain().length(); ++m) {
    auto d = msn::map_distance(a, b, m);
    levels.push_back(d.value ? json(msn::to_string(*d.value)) : json(nullptr));
  }
  return out(levels);
}

std::string evaluate(const std::string& x, std::size_t level, const std::vector<std::string>& v) {
  auto s = space(x);
  if (level >= s.length()) throw msn::Error(msn::ErrorKind::BadLevel, "level beyond the length of the space");
  msn::Vec w;
  for (const auto& c : v) w.push_back(rational(c));
  if (w.size() != s.dim()) throw msn::Error(msn::ErrorKind::DimensionMismatch, "vector has the wrong dimension");
  return msn::to_string(s.seminorm(level)(w));
}

std::string pushout(const std::string& x, const std::string& y, const std::string& z, const std::string& f,
                    const std::string& g, const std::string& delta, const std::string& eps, bool graded) {
  auto xs = space(x), ys = space(y), zs = space(z);
  auto r = msn::pushout_nap(xs, ys, zs, map(f).retarget(xs, ys), map(g).retarget(xs, zs), rational(delta),
                            rational(eps), {graded, false, true});
  return out(msn::io::to_json(r));
}

std::string build_iso(const std::string& x, const std::string& y, std::uint64_t seed) {
  auto r = msn::build_iso_from_invariant(space(x), space(y), seed);
  if (!r.iso) return out(json{{"found", false}, {"reason", r.reason}});
  return out(json{{"found", true}, {"map", msn::io::to_json(*r.iso)}});
}

std::string build_tower(const std::vector<std::string>& catalog, const std::string& dir, std::size_t stages,
                        const std::vector<std::string>& deltas, std::uint64_t seed, bool omega) {
  std::vector<msn::MultiSpace> cat;
  for (const auto& c : catalog) cat.push_back(space(c));
  msn::TowerOptions o;
  o.stages = stages;
  o.deltas.clear();
  for (const auto& d : deltas) o.deltas.push_back(rational(d));
  o.seed = seed;
  o.omega = omega;
  auto t = msn::build_tower(cat, o);
  msn::save_tower(t, dir);
  json dims = json::array();
  for (const auto& s : t.stages) dims.push_back(s.dim());
  return out(json{{"stages", t.stages.size()}, {"dims", dims}});
}

std::string verify_tower(const std::string& dir) { return out(msn::to_json(msn::verify_tower(msn::load_tower(dir)))); }

std::string back_and_forth(const std::string& a, const std::string& b, std::size_t start, std::size_t steps) {
  return out(msn::to_json(msn::back_and_forth(msn::load_tower(a), msn::load_tower(b), start, steps)));
}

std::string build_net(const std::string& x, const std::string& y, const std::string& eps) {
  return out(msn::to_json(msn::build_net(space(x), space(y), rational(eps))));
}

std::string search(const std::string& net_xz, const std::string& net_xy, const std::string& colouring,
                   const std::vector<std::string>& candidates, const std::string& eps) {
  auto nz = msn::net_from_json(parse(net_xz));
  auto ny = msn::net_from_json(parse(net_xy));
  auto c = msn::colouring_from_json(parse(colouring), nz);
  std::vector<msn::LinearMap> cands;
  for (const auto& m : candidates)
    cands.emplace_back(ny.y, nz.y, msn::io::matrix_from_json(parse(m), nz.y.dim(), ny.y.dim()));
  auto w = msn::search_monochromatic(c, nz, ny, cands, rational(eps));
  if (!w) return out(json{{"found", false}});
  return out(json{{"found", true}, {"candidate", w->candidate}, {"colour", w->colour}});
}

}  // namespace

PYBIND11_MODULE(_msn, m) {
  m.doc() = "Exact multi-seminormed space computations";
  static py::exception<msn::Error> error(m, "MsnError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const msn::Error& e) {
      py::tuple args = py::make_tuple(std::string(msn::name(e.kind())), std::string(e.what()), e.witness().dump());
      PyErr_SetObject(error.ptr(), args.ptr());
    }
  });

  m.def("set_threads", [](std::size_t n) { msn::set_thread_count(n); });
  m.def("invariant_alpha", &invariant_alpha);
  m.def("is_embedding", &is_embedding);
  m.def("map_distance", &map_distance);
  m.def("evaluate", &evaluate);
  m.def("pushout", &pushout);
  m.def("build_iso", &build_iso);
  m.def("build_tower", &build_tower);
  m.def("verify_tower", &verify_tower);
  m.def("back_and_forth", &back_and_forth);
  m.def("build_net", &build_net);
  m.def("search_monochromatic", &search);
}
