#include <doctest.h>

#include "generators.hpp"
#include "msn/amalgam.hpp"
#include "msn/error.hpp"
#include "msn/ramsey.hpp"
#include "test_support.hpp"

#include <algorithm>

using namespace msn;
using msn::test::q;
using msn::test::v;

namespace {

MultiSpace line() { return MultiSpace::linf(1); }

Vec image(const LinearMap& f) { return f.matrix().column(0); }

LinearMap point(const MultiSpace& x, const MultiSpace& y, const Vec& w) {
  return LinearMap(x, y, Matrix::from_columns({w}, y.dim()));
}

bool has_image(const EmbeddingNet& net, const Vec& w) {
  return std::any_of(net.points.begin(), net.points.end(), [&](const LinearMap& p) { return image(p) == w; });
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;  // sentinel: nothing thrown
}

// The hexagon amalgam of two lines over a line with eps = 1/2.
AmalgamResult hexagon() {
  LinearMap id(line(), line(), Matrix::identity(1));
  return pushout_nap(line(), line(), line(), id, id, 0, q(1, 2));
}

}  // namespace

TEST_CASE("sup-norm net: vertices and midpoints of the square") {
  auto net = build_net(line(), MultiSpace::linf(2), 1);
  CHECK(net.certified);
  CHECK(net.resolution <= 1);
  CHECK(net.points.size() == 8);
  for (long t : {-1, 0, 1}) {
    CHECK(has_image(net, v({1, t})));
    CHECK(has_image(net, v({-1, t})));
    CHECK(has_image(net, v({t, 1})));
    CHECK(has_image(net, v({t, -1})));
  }
  for (const auto& p : net.points) {
    CHECK(max_abs(image(p)) == 1);
    CHECK(is_embedding(p, 0).ok);
  }
}

TEST_CASE("net density holds against random unit vectors") {
  gen::Rng rng(31);
  MultiSpace cube = MultiSpace::linf(3);
  auto net = build_net(line(), cube, q(1, 2));
  REQUIRE(net.certified);
  CHECK(net.resolution <= q(1, 2));
  for (int it = 0; it < 60; ++it) {
    Vec w(3);
    for (auto& c : w) c = q(rng.range(-12, 12), 12);
    w[static_cast<std::size_t>(rng.range(0, 2))] = rng.coin() ? 1 : -1;
    Rational best = 100;
    for (const auto& p : net.points) best = std::min(best, max_abs(sub(image(p), w)));
    CHECK(best <= net.resolution);
  }
}

TEST_CASE("hexagon net with two subdivisions per edge") {
  auto z = hexagon().w;
  auto net = build_net_uniform(line(), z, 2);
  CHECK(net.points.size() == 12);
  CHECK(net.resolution == q(3, 8));
  for (const auto& p : net.points) CHECK(z.seminorm(0)(image(p)) == 1);
  CHECK(has_image(net, v({2, -2})));
  CHECK(has_image(net, v({q(3, 2), -1})));
  CHECK(has_image(net, v({q(1, 2), q(1, 2)})));
}

TEST_CASE("net of a space into itself contains plus and minus the identity") {
  MultiSpace x(1, {Seminorm::make(1, {v({2})}), Seminorm::make(1, {v({3})})});
  auto net = build_net(x, x, q(1, 3));
  CHECK(net.points.size() == 2);
  CHECK(has_image(net, v({1})));
  CHECK(has_image(net, v({-1})));
}

TEST_CASE("empty embedding set") {
  MultiSpace x(1, {Seminorm::make(1, {v({1})}), Seminorm::zero(1)});
  MultiSpace y = MultiSpace::linf(2, 2);
  CHECK(kind_of([&] { build_net(x, y, 1); }) == ErrorKind::EmptyEmbeddingSet);
  CHECK(kind_of([&] { build_net(x, line(), 1); }) == ErrorKind::EmptyEmbeddingSet);
}

TEST_CASE("sampled nets for higher-dimensional domains") {
  auto net = build_net(MultiSpace::linf(2), MultiSpace::linf(3), 1, 4);
  CHECK_FALSE(net.certified);
  CHECK_FALSE(net.points.empty());
  for (const auto& p : net.points) CHECK(is_embedding(p, 0).ok);
}

TEST_CASE("oscillation") {
  auto net = build_net(line(), MultiSpace::linf(2), 1);
  auto constant = table_colouring(ColouringKind::Continuous, 1, net.points, std::vector<Rational>(8, q(1, 3)));
  CHECK(oscillation(constant, net.points) == 0);
  auto two = table_colouring(ColouringKind::Continuous, 1, {net.points[0], net.points[1]}, {0, 1});
  CHECK(oscillation(two, two.points) == 1);
  CHECK(oscillation(coordinate_clamp(0), net.points) == 1);
  CHECK(kind_of([&] { oscillation(two, net.points); }) == ErrorKind::UndefinedPoint);

  auto mono = table_colouring(ColouringKind::Discrete, 2, net.points, std::vector<Rational>(8, 1));
  CHECK(oscillation(mono, net.points) == 0);
  std::vector<Rational> split;
  for (const auto& p : net.points) split.push_back(image(p)[0] > 0 ? 1 : 0);
  auto halves = table_colouring(ColouringKind::Discrete, 2, net.points, split);
  CHECK(oscillation(halves, net.points, 0) == 1);
  CHECK(oscillation(halves, net.points, 2) == 0);
}

TEST_CASE("discretize") {
  auto net = build_net(line(), MultiSpace::linf(2), 1);
  auto half = table_colouring(ColouringKind::Continuous, 1, net.points, std::vector<Rational>(8, q(1, 2)));
  auto d = discretize(half, q(1, 4));
  CHECK(d.palette == std::vector<Rational>{0, q(1, 4), q(1, 2), q(3, 4), 1});
  for (const auto& p : net.points) CHECK(d.palette.at(d(p).get_num().get_ui()) == q(1, 2));
  auto zero = table_colouring(ColouringKind::Continuous, 1, net.points, std::vector<Rational>(8, 0));
  auto dz = discretize(zero, q(1, 4));
  for (const auto& p : net.points) CHECK(dz(p) == 0);

  auto cube = build_net(line(), MultiSpace::linf(3), q(1, 2));
  REQUIRE(cube.points.size() >= 100);
  auto c = distance_to(cube.points[7], 1);
  const Rational eps = q(1, 3);
  auto dc = discretize(c, eps);
  for (std::size_t i = 0; i < 100; ++i) {
    const auto& p = cube.points[i * (cube.points.size() / 100)];
    CHECK(abs(c(p) - dc.palette.at(dc(p).get_num().get_ui())) <= eps);
  }
}

TEST_CASE("bad colouring from a discrete colouring") {
  auto net = build_net_uniform(line(), MultiSpace::linf(2), 4);
  const std::size_t n = net.points.size();
  auto none = bad_colouring_from_discrete(table_colouring(ColouringKind::Discrete, 2, net.points, std::vector<Rational>(n, 0)));
  for (const auto& p : net.points) CHECK(none(p) == 1);

  std::vector<Rational> colours(n, 0);
  std::vector<Vec> red;
  for (std::size_t i = 0; i < n; ++i)
    if (image(net.points[i]) == v({1, 1}) || image(net.points[i]) == v({-1, 0})) {
      colours[i] = 1;
      red.push_back(image(net.points[i]));
    }
  REQUIRE(red.size() == 2);
  auto bad = bad_colouring_from_discrete(table_colouring(ColouringKind::Discrete, 2, net.points, colours));
  CHECK_FALSE(lipschitz_violation(bad, net.points));
  for (std::size_t i = 0; i < n; ++i) {
    const Vec w = image(net.points[i]);
    Rational oracle = 1;
    for (const auto& r : red) oracle = std::min(oracle, max_abs(sub(w, r)));
    CHECK(bad(net.points[i]) == oracle);
    CHECK((bad(net.points[i]) == 0) == (colours[i] == 1));
  }
  CHECK(bad(point(line(), MultiSpace::linf(2), v({1, q(1, 2)}))) == q(1, 2));
}

TEST_CASE("Lipschitz audit flags a violating table") {
  auto net = build_net_uniform(line(), MultiSpace::linf(2), 4);
  auto a = point(line(), MultiSpace::linf(2), v({1, 0}));
  auto b = point(line(), MultiSpace::linf(2), v({1, q(1, 2)}));
  auto bad = table_colouring(ColouringKind::Continuous, 1, {a, b}, {0, 1});
  CHECK(lipschitz_violation(bad, bad.points));
  auto fine = table_colouring(ColouringKind::Continuous, 1, {a, b}, {0, q(1, 2)});
  CHECK_FALSE(lipschitz_violation(fine, fine.points));
  CHECK_FALSE(lipschitz_violation(distance_to(a, 1), net.points));
}

TEST_CASE("product colouring") {
  SUBCASE("single level") {
    MultiSpace z = MultiSpace::linf(2);
    auto c = distance_to(point(line(), z, v({1, 0})), 1);
    auto pc = product_colouring(c, line(), {z});
    CHECK(pc.z == z);
    for (const auto& p : build_net(line(), z, q(1, 2)).points) CHECK(pc({p}) == c(p));
  }
  SUBCASE("identity and random eta") {
    gen::Rng rng(8);
    for (int inst = 0; inst < 5; ++inst) {
      auto pi = gen::random_product_instance(rng, 2);
      MultiSpace z = product_space(pi.zs, ProductMode::Coordinate);
      LinearMap rho(pi.y, z, pi.rho);
      REQUIRE(is_embedding(rho, 0).ok);
      auto etas = build_net(pi.x, pi.y, q(1, 2)).points;
      auto c = distance_to(compose(rho, etas.front()), 2);
      auto pc = product_colouring(c, pi.x, pi.zs);
      for (int k = 0; k < 20; ++k) {
        const auto& eta = etas[static_cast<std::size_t>(rng.range(0, static_cast<long>(etas.size()) - 1))];
        std::vector<LinearMap> blocks;
        for (std::size_t j = 0; j < pi.zs.size(); ++j)
          blocks.push_back(LinearMap(pc.level_space(j), pi.zs[j], pi.rho_blocks[j] * eta.matrix()));
        CHECK(pc.assemble(blocks).matrix() == compose(rho, eta).matrix());
        CHECK(c(compose(rho, eta)) == pc(blocks));
      }
    }
  }
  SUBCASE("shape errors") {
    MultiSpace x = MultiSpace::linf(1, 2);
    auto pc = product_colouring(coordinate_clamp(0), x, {line(), line()});
    CHECK(kind_of([&] { pc({point(line(), line(), v({1}))}); }) == ErrorKind::ShapeMismatch);
    CHECK(kind_of([&] { product_colouring(coordinate_clamp(0), x, {line()}); }) == ErrorKind::ShapeMismatch);
    auto two = point(line(), line(), v({2}));
    CHECK(kind_of([&] { pc({two, two}); }) == ErrorKind::NotAnEmbedding);
  }
}

TEST_CASE("quotient lift") {
  SUBCASE("a norm needs no quotient") {
    MultiSpace z = MultiSpace::linf(2);
    auto c = coordinate_clamp(0);
    auto lift = quotient_lift(c, line(), z);
    CHECK(lift.pi_x == Matrix::identity(1));
    CHECK(lift.x_tilde == line());
    for (const auto& p : build_net(line(), z, q(1, 2)).points) CHECK(lift.lifted(p) == c(p));
  }
  SUBCASE("first-coordinate seminorm on the plane") {
    gen::Rng rng(12);
    MultiSpace x(2, {Seminorm::make(2, {v({1, 0})})});
    MultiSpace z = MultiSpace::linf(2);
    auto lift = quotient_lift(distance_to(point(line(), z, v({0, 1})), 1), x, z);
    CHECK(lift.x_tilde.dim() == 1);
    CHECK(lift.pi_x * lift.section == Matrix::identity(1));
    for (int it = 0; it < 30; ++it) {
      Vec w = rng.vec(4);
      CHECK(lift.padded.seminorm(0)(w) == std::max(abs(w[0]), abs(w[1])));
    }
    for (int it = 0; it < 30; ++it) {
      auto ey = gen::random_extension(rng, x, 3, 1, {Rational(1)}, false);
      auto sy = separated_quotient(ey.y);
      LinearMap rho(sy.space, z, gen::random_matrix(rng, 2, sy.space.dim()));
      LinearMap theta(lift.x_tilde, z, gen::random_matrix(rng, 2, 1));
      auto t = distance_transfer(lift, ey.y, rho, theta, ey.f);
      CHECK(t.holds());
    }
  }
  SUBCASE("several levels are rejected") {
    CHECK(kind_of([] { quotient_lift(coordinate_clamp(0), MultiSpace::linf(1, 2), line()); }) ==
          ErrorKind::MultiLevelInput);
  }
}

TEST_CASE("monochromatic search") {
  auto h = hexagon();
  auto net_xz = build_net(line(), h.w, q(1, 8));
  auto net_xy = build_net(line(), line(), q(1, 8));
  std::vector<LinearMap> cands{h.leg_y, h.leg_z};
  const std::size_t n = net_xz.points.size();

  auto constant = table_colouring(ColouringKind::Discrete, 2, net_xz.points, std::vector<Rational>(n, 1));
  auto w = search_monochromatic(constant, net_xz, net_xy, cands, q(1, 2));
  REQUIRE(w);
  CHECK(w->candidate == 0);
  CHECK(w->colour == 1);

  auto single = table_colouring(ColouringKind::Discrete, 1, net_xz.points, std::vector<Rational>(n, 0));
  CHECK(search_monochromatic(single, net_xz, net_xy, cands, q(1, 2)));

  std::vector<Rational> sign;
  for (const auto& p : net_xz.points) sign.push_back(image(p)[0] >= 0 ? 0 : 1);
  auto c = table_colouring(ColouringKind::Discrete, 2, net_xz.points, sign);
  auto found = search_monochromatic(c, net_xz, net_xy, cands, q(1, 2));
  REQUIRE(found);
  // Coverage re-checked on the image vectors with the hexagon seminorm.
  for (const auto& eta : net_xy.points) {
    Vec xi = cands[found->candidate].matrix().apply(image(eta));
    bool covered = false;
    for (std::size_t p = 0; p < n; ++p)
      covered = covered || (sign[p] == Rational(static_cast<long>(found->colour)) &&
                            h.w.seminorm(0)(sub(xi, image(net_xz.points[p]))) <= q(1, 2));
    CHECK(covered);
  }

  auto not_emb = point(line(), h.w, v({2, 0}));
  CHECK(kind_of([&] { search_monochromatic(c, net_xz, net_xy, {not_emb}, q(1, 2)); }) == ErrorKind::NotAnEmbedding);
}

TEST_CASE("net and colouring files round trip") {
  auto h = hexagon();
  auto net = build_net(line(), h.w, q(1, 4));
  auto back = net_from_json(to_json(net));
  CHECK(back.x == net.x);
  CHECK(back.y == net.y);
  CHECK(back.resolution == net.resolution);
  CHECK(back.certified == net.certified);
  REQUIRE(back.points.size() == net.points.size());
  for (std::size_t i = 0; i < net.points.size(); ++i) CHECK(back.points[i] == net.points[i]);

  std::vector<Rational> vals;
  for (std::size_t i = 0; i < net.points.size(); ++i) vals.push_back(static_cast<long>(i % 3));
  auto c = table_colouring(ColouringKind::Discrete, 3, net.points, vals);
  auto j = colouring_to_json(c, net);
  auto c2 = colouring_from_json(j, back);
  CHECK(c2.colours == 3);
  for (const auto& p : net.points) CHECK(c2(p) == c(p));
  CHECK(colouring_to_json(c2, back) == j);
  j["values"]["0"] = "7";
  CHECK(kind_of([&] { colouring_from_json(j, back); }) == ErrorKind::Format);
}
