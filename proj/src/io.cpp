#include "msn/io.hpp"

#include "msn/error.hpp"

#include <fstream>
#include <sstream>

namespace msn::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Format, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

void check_format(const json& j) {
  if (j.contains("format") && j.at("format") != kFormat) bad("unsupported format tag");
}

std::size_t count_from_json(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) bad(std::string(what) + " must be a non-negative integer");
  return j.get<std::size_t>();
}

}  // namespace

json to_json(const Rational& q) { return to_string(q); }

json to_json(const Vec& v) {
  json out = json::array();
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(to_json(m.row(r)));
  return out;
}

json to_json(const Seminorm& s) {
  json fs = json::array();
  for (const auto& f : s.functionals()) fs.push_back(to_json(f));
  return json{{"functionals", fs}};
}

json to_json(const MultiSpace& x) {
  json seq = json::array();
  for (const auto& s : x.seminorms()) seq.push_back(to_json(s));
  return json{{"format", kFormat}, {"kind", "space"}, {"dim", x.dim()}, {"graded", x.graded()}, {"seminorms", seq}};
}

json to_json(const LinearMap& f) {
  return json{{"format", kFormat},
              {"kind", "map"},
              {"domain", to_json(f.domain())},
              {"codomain", to_json(f.codomain())},
              {"matrix", to_json(f.matrix())}};
}

json to_json(const AmalgamResult& r) {
  json cert = json::array();
  for (const auto& c : r.certificate) cert.push_back(to_string(c));
  return json{{"format", kFormat},
              {"kind", "amalgam"},
              {"w", to_json(r.w)},
              {"legY", to_json(r.leg_y)},
              {"legZ", to_json(r.leg_z)},
              {"certificate", cert},
              {"delta", to_string(r.delta)},
              {"eps", to_string(r.eps)},
              {"bound", to_string(r.bound)}};
}

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  bad("rationals must be strings \"p/q\" or integers");
}

Vec vec_from_json(const json& j) {
  if (!j.is_array()) bad("vector must be an array");
  Vec v;
  for (const auto& e : j) v.push_back(rational_from_json(e));
  return v;
}

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) bad("matrix row count does not match the codomain dimension");
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    Vec row = vec_from_json(j[r]);
    if (row.size() != cols) bad("matrix column count does not match the domain dimension");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
  }
  return m;
}

MultiSpace space_from_json(const json& j) {
  check_format(j);
  std::size_t dim = count_from_json(field(j, "dim"), "dim");
  bool graded = false;
  if (j.contains("graded")) {
    if (!j.at("graded").is_boolean()) bad("graded must be a boolean");
    graded = j.at("graded").get<bool>();
  }
  const json& seq = field(j, "seminorms");
  if (!seq.is_array() || seq.empty()) bad("seminorms must be a non-empty array");
  std::vector<Seminorm> seminorms;
  for (const auto& s : seq) {
    const json& fs = s.is_array() ? s : field(s, "functionals");
    if (!fs.is_array()) bad("functionals must be an array");
    std::vector<Vec> list;
    for (const auto& f : fs) {
      Vec v = vec_from_json(f);
      if (v.size() != dim) bad("functional length differs from dim");
      list.push_back(std::move(v));
    }
    seminorms.push_back(Seminorm::make(dim, std::move(list)));
  }
  return MultiSpace(dim, std::move(seminorms), graded);
}

LinearMap map_from_json(const json& j, const std::filesystem::path& base) {
  check_format(j);
  auto space = [&](const char* key, const char* ref_key) {
    const json* node = nullptr;
    if (j.contains(key)) node = &j.at(key);
    else if (j.contains(ref_key)) node = &j.at(ref_key);
    else bad(std::string("missing field \"") + key + "\"");
    if (node->is_string()) return load_space(base / node->get<std::string>());
    return space_from_json(*node);
  };
  MultiSpace dom = space("domain", "domainRef");
  MultiSpace cod = space("codomain", "codomainRef");
  return LinearMap(dom, cod, matrix_from_json(field(j, "matrix"), cod.dim(), dom.dim()));
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Format, path.string() + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_json(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << dump(j);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

MultiSpace load_space(const std::filesystem::path& path) { return space_from_json(read_json(path)); }

LinearMap load_map(const std::filesystem::path& path) { return map_from_json(read_json(path), path.parent_path()); }

}  // namespace msn::io
