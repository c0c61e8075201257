#include <doctest.h>

#include "generators.hpp"
#include "msn/error.hpp"
#include "msn/io.hpp"
#include "test_support.hpp"

#include <filesystem>
#include <fstream>

using namespace msn;
using msn::test::q;
using msn::test::v;

TEST_CASE("space and map files round trip") {
  gen::Rng rng(77);
  auto dir = std::filesystem::temp_directory_path() / "msn_io_test";
  std::filesystem::remove_all(dir);
  for (int it = 0; it < 20; ++it) {
    MultiSpace x = gen::random_space(rng, static_cast<std::size_t>(rng.range(1, 3)),
                                     static_cast<std::size_t>(rng.range(1, 3)), it % 2 == 0);
    MultiSpace y = gen::random_space(rng, static_cast<std::size_t>(rng.range(1, 3)), x.length());
    LinearMap f(x, y, gen::random_matrix(rng, y.dim(), x.dim()));
    io::write_json(dir / "x.json", io::to_json(x));
    io::write_json(dir / "f.json", io::to_json(f));
    CHECK(io::load_space(dir / "x.json") == x);
    CHECK(io::load_map(dir / "f.json") == f);
    CHECK(io::dump(io::to_json(io::load_space(dir / "x.json"))) == io::dump(io::to_json(x)));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("map files may reference space files") {
  auto dir = std::filesystem::temp_directory_path() / "msn_io_ref";
  std::filesystem::remove_all(dir);
  io::write_json(dir / "a.json", io::to_json(MultiSpace::linf(2)));
  using io::json;
  json m{{"domainRef", "a.json"}, {"codomainRef", "a.json"}, {"matrix", json::array({json::array({"0", "1"}), json::array({"1/2", 3})})}};
  io::write_json(dir / "m.json", m);
  LinearMap f = io::load_map(dir / "m.json");
  CHECK(f.matrix()(1, 0) == q(1, 2));
  CHECK(f.matrix()(1, 1) == 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed input is a format error") {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;  // sentinel: no error
  };
  using io::json;
  CHECK(kind_of([] { io::space_from_json(json{{"dim", 2}}); }) == ErrorKind::Format);
  CHECK(kind_of([] { io::space_from_json(json{{"dim", 2}, {"seminorms", json::array({json::array({json::array({"1"})})})}}); }) == ErrorKind::Format);
  CHECK(kind_of([] { io::space_from_json(json{{"format", "other"}, {"dim", 1}, {"seminorms", json::array({json::array({json::array({"1"})})})}}); }) ==
        ErrorKind::Format);
  CHECK(kind_of([] { io::rational_from_json(json(1.5)); }) == ErrorKind::Format);
  CHECK(kind_of([] { io::read_json("/nonexistent/msn.json"); }) == ErrorKind::Io);
  auto p = std::filesystem::temp_directory_path() / "msn_bad.json";
  std::ofstream(p) << "{ not json";
  CHECK(kind_of([&] { io::read_json(p); }) == ErrorKind::Format);
  std::filesystem::remove(p);
  // Bare functional arrays are accepted as seminorms.
  MultiSpace x = io::space_from_json(json{{"dim", 2}, {"seminorms", json::array({json::array({json::array({"1", "0"}), json::array({"0", "1"})})})}});
  CHECK(x == MultiSpace(2, {Seminorm::linf(2)}));
  CHECK(x.seminorm(0)(v({3, -4})) == 4);
}
