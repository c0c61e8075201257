#pragma once

#include "msn/amalgam.hpp"
#include "msn/linear_map.hpp"
#include "msn/space.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace msn::io {

using nlohmann::json;

inline constexpr const char* kFormat = "msn/1";

json to_json(const Rational& q);
json to_json(const Vec& v);
json to_json(const Matrix& m);
json to_json(const Seminorm& s);
json to_json(const MultiSpace& x);
// Spaces are written inline.
json to_json(const LinearMap& f);
json to_json(const AmalgamResult& r);

Rational rational_from_json(const json& j);
Vec vec_from_json(const json& j);
Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols);
MultiSpace space_from_json(const json& j);
// `base` resolves string references to space files.
LinearMap map_from_json(const json& j, const std::filesystem::path& base = {});

// Throws Error(Io) on unreadable files and Error(Format) on malformed JSON.
json read_json(const std::filesystem::path& path);
// Pretty-printed with a trailing newline; creates parent directories.
void write_json(const std::filesystem::path& path, const json& j);
std::string dump(const json& j);

MultiSpace load_space(const std::filesystem::path& path);
LinearMap load_map(const std::filesystem::path& path);

}  // namespace msn::io
