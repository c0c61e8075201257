#include <doctest.h>

#include "generators.hpp"
#include "msn/amalgam.hpp"
#include "msn/error.hpp"
#include "test_support.hpp"

#include <algorithm>

using namespace msn;
using msn::test::q;
using msn::test::v;

namespace {

MultiSpace line(std::size_t len = 1) {
  return MultiSpace(1, std::vector<Seminorm>(len, Seminorm::linf(1)), true);
}

LinearMap id1(std::size_t len = 1) { return LinearMap::identity(line(len)); }

// inf_x |y - x| + |z + x| + c|x| over the breakpoints {y, -z, 0}.
Rational breakpoint_oracle(const Rational& y, const Rational& z, const Rational& c) {
  Rational best = -1;
  for (const Rational& x : {y, Rational(-z), Rational(0)}) {
    Rational val = abs(y - x) + abs(z + x) + c * abs(x);
    if (best < 0 || val < best) best = val;
  }
  return best;
}

}  // namespace

TEST_CASE("pushout over the line with eps 1/2") {
  auto r = pushout_nap(line(), line(), line(), id1(), id1(), 0, q(1, 2));
  const Seminorm& s = r.w.seminorm(0);
  std::vector<Vec> expected{v({1, 1}), v({1, q(1, 2)}), v({q(1, 2), 1})};
  std::sort(expected.begin(), expected.end(), LexLess{});
  CHECK(s.functionals() == expected);
  CHECK(s(v({1, -1})) == q(1, 2));
  CHECK(s(v({1, 0})) == 1);
  REQUIRE(r.certificate.size() == 1);
  CHECK(r.certificate[0] == q(1, 2));
  CHECK(is_embedding(r.leg_y, 0).ok);
  CHECK(is_embedding(r.leg_z, 0).ok);
  for (long a = -4; a <= 4; ++a)
    for (long b = -4; b <= 4; ++b) {
      Rational y = q(a, 2), z = q(b, 3);
      CHECK(s(v({y, z})) == breakpoint_oracle(y, z, q(1, 2)));
      CHECK(pushout_primal_value(id1(), id1(), 0, q(1, 2), v({y}), v({z})) == s(v({y, z})));
    }
  // Same vertex set through the independent enumeration of the dual polytope.
  std::vector<Inequality> ineqs{{v({1, 0}), 1}, {v({-1, 0}), 1}, {v({0, 1}), 1},
                                {v({0, -1}), 1}, {v({1, -1}), q(1, 2)}, {v({-1, 1}), q(1, 2)}};
  auto brute = msn::test::brute_force_vertices(ineqs, 2);
  CHECK(brute.size() == 6);
  std::vector<Vec> reps;
  for (const auto& p : brute) reps.push_back(sign_canonical(p));
  std::sort(reps.begin(), reps.end(), LexLess{});
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
  CHECK(reps == s.functionals());
}

TEST_CASE("pushout argument checks") {
  try {
    pushout_nap(line(), line(), line(), id1(), id1(), 0, 0);
    FAIL("expected EpsNonPositive");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EpsNonPositive);
  }
  LinearMap twice(line(), line(), Matrix::from_rows({v({2})}, 1));
  try {
    pushout_nap(line(), line(), line(), twice, id1(), q(1, 2), q(1, 8));
    FAIL("expected NotAnEmbedding");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAnEmbedding);
  }
}

TEST_CASE("pushout over the trivial space is the sum") {
  MultiSpace triv = MultiSpace::trivial();
  MultiSpace y = MultiSpace::linf(2);
  LinearMap f(triv, y, Matrix(2, 0));
  LinearMap g(triv, line(), Matrix(1, 0));
  auto r = pushout_nap(triv, y, line(), f, g, 0, q(1, 4));
  CHECK(r.w.dim() == 3);
  CHECK(r.w.seminorm(0)(v({1, -2, 3})) == 5);
  CHECK(is_embedding(r.leg_y, 0).ok);
  CHECK(is_embedding(r.leg_z, 0).ok);
  CHECK(r.certificate == std::vector<Rational>{0});
}

TEST_CASE("pushout level layout beyond X") {
  MultiSpace y = line(2);
  MultiSpace z = line(3);
  LinearMap f(line(1), y, Matrix::identity(1));
  LinearMap g(line(1), z, Matrix::identity(1));
  auto r = pushout_nap(line(1), y, z, f, g, 0, q(1, 2));
  CHECK(r.w.length() == 3);
  CHECK(r.w.seminorm(1)(v({3, -5})) == 5);
  CHECK(r.w.seminorm(2)(v({3, -5})) == 5);
  CHECK(r.w.seminorm(2)(v({3, 0})) == 0);
  auto gr = pushout_nap(line(1), y, z, f, g, 0, q(1, 2), {true, false, true});
  CHECK(gr.w.graded());
  CHECK(gr.w.seminorm(2)(v({3, 0})) == 3);
  auto sep = pushout_nap(line(1), y, z, f, g, 0, q(1, 2), {false, true, true});
  CHECK(sep.w.length() == 4);
  CHECK(is_separated(sep.w));
}

TEST_CASE("random pushouts: isometric legs, bound, dual/primal agreement") {
  gen::Rng rng(2024);
  for (int it = 0; it < 30; ++it) {
    Rational delta = it % 2 ? q(1, 4) : Rational(0);
    bool graded = it % 3 == 0;
    auto s = gen::random_span(rng, delta, graded);
    auto r = pushout_nap(s.x, s.y, s.z, s.f, s.g, delta, q(1, 8), {graded, false, true});
    CHECK(is_embedding(r.leg_y, 0).ok);
    CHECK(is_embedding(r.leg_z, 0).ok);
    for (const auto& c : r.certificate) {
      CHECK(c <= 2 * delta + q(1, 8));
      if (delta == 0) CHECK(c <= q(1, 8));
    }
    if (graded) CHECK_FALSE(graded_violation(r.w.seminorms()).has_value());
    Rational c = pushout_constant(delta, q(1, 8));
    for (std::size_t n = 0; n < s.x.length(); ++n)
      for (int k = 0; k < 10; ++k) {
        Vec y = rng.vec(s.y.dim(), 4), z = rng.vec(s.z.dim(), 4);
        CHECK(r.w.seminorm(n)(concat(y, z)) == pushout_primal_value(s.f, s.g, n, c, y, z));
      }
  }
}

TEST_CASE("n-embedding pushout") {
  auto r = pushout_n_embedding(line(2), line(2), line(2), id1(2), id1(2), 1, q(1, 2));
  REQUIRE(r.certificate.size() == 1);
  CHECK(r.certificate[0] <= q(1, 2));
  CHECK(r.w.seminorm(1)(v({1, -1})) == 2);
  CHECK(r.w.seminorm(0)(v({1, -1})) == q(1, 2));
  CHECK(r.w.graded());
  CHECK(is_embedding(r.leg_y, 0).ok);
  CHECK(is_embedding(r.leg_z, 0).ok);

  auto full = pushout_n_embedding(line(2), line(2), line(2), id1(2), id1(2), 2, q(1, 2));
  auto nap = pushout_nap(line(2), line(2), line(2), id1(2), id1(2), 0, q(1, 2));
  CHECK(full.w.seminorms() == nap.w.seminorms());

  LinearMap twice(line(2), line(2), Matrix::from_rows({v({2})}, 1));
  try {
    pushout_n_embedding(line(2), line(2), line(2), twice, id1(2), 1, q(1, 2));
    FAIL("expected NotAnNEmbedding");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAnNEmbedding);
  }
  // Maps that only preserve level 0 are accepted for n = 1.
  MultiSpace y2(1, {Seminorm::linf(1), Seminorm::linf(1).scaled(3)}, true);
  LinearMap f(line(2), y2, Matrix::identity(1));
  auto r2 = pushout_n_embedding(line(2), y2, line(2), f, id1(2), 1, q(1, 4));
  CHECK(r2.certificate[0] <= q(1, 4));
  CHECK(is_embedding(r2.leg_y, 0).ok);
}

TEST_CASE("product amalgam") {
  auto p = product_amalgam(line(), line(), line(), id1(), id1(), 0, q(1, 2));
  auto n = pushout_nap(line(), line(), line(), id1(), id1(), 0, q(1, 2));
  CHECK(p.certificate == n.certificate);
  CHECK(p.w.seminorms() == n.w.seminorms());

  MultiSpace triv = MultiSpace::trivial();
  MultiSpace y = MultiSpace::linf(2);
  auto jp = product_amalgam(triv, y, line(), LinearMap(triv, y, Matrix(2, 0)), LinearMap(triv, line(), Matrix(1, 0)), 0,
                            q(1, 2));
  CHECK(is_embedding(jp.leg_y, 0).ok);
  CHECK(is_embedding(jp.leg_z, 0).ok);

  // Y shorter than Z: the last level carries Z's norm alone.
  MultiSpace z3(1, {Seminorm::linf(1), Seminorm::linf(1), Seminorm::linf(1).scaled(2)}, true);
  LinearMap g(line(), z3, Matrix::identity(1));
  auto r = product_amalgam(line(), line(2), z3, LinearMap(line(), line(2), Matrix::identity(1)), g, 0, q(1, 2));
  CHECK(r.w.length() == 3);
  CHECK(is_embedding(r.leg_y, 0).ok);
  CHECK(is_embedding(r.leg_z, 0).ok);
  CHECK(is_separated(r.w));
  for (long t = -3; t <= 3; ++t) CHECK(r.w.seminorm(2)(r.leg_z(v({t}))) == z3.seminorm(2)(v({t})));

  MultiSpace nonsep(2, {Seminorm::make(2, {v({1, 0})})});
  CHECK_THROWS_AS(product_amalgam(triv, nonsep, line(), LinearMap(triv, nonsep, Matrix(2, 0)),
                                  LinearMap(triv, line(), Matrix(1, 0)), 0, q(1, 2)),
                  Error);

  gen::Rng rng(31);
  for (int it = 0; it < 10; ++it) {
    Rational delta = it % 2 ? q(1, 4) : Rational(0);
    auto s = gen::random_span(rng, delta, false);
    if (!is_separated(s.x) || !is_separated(s.y) || !is_separated(s.z)) continue;
    auto pr = product_amalgam(s.x, s.y, s.z, s.f, s.g, delta, q(1, 8));
    CHECK(is_separated(pr.w));
    CHECK(is_embedding(pr.leg_y, 0).ok);
    CHECK(is_embedding(pr.leg_z, 0).ok);
    for (const auto& c : pr.certificate) CHECK(c <= 2 * delta + q(1, 8));
  }
}

TEST_CASE("multi amalgam") {
  auto empty = multi_amalgam(line(), {}, q(1, 2));
  CHECK(empty.z == line());
  CHECK(empty.i.matrix() == Matrix::identity(1));

  AmalgamPair pair{line(), id1(), id1(), 0};
  auto one = multi_amalgam(line(), {pair}, q(1, 2));
  auto single = pushout_nap(line(), line(), line(), id1(), id1(), 0, q(1, 2));
  CHECK(one.z == single.w);
  CHECK(one.certificates[0] == single.certificate);
  CHECK(one.bounds[0] == q(1, 2));

  auto two = multi_amalgam(line(), {pair, pair}, q(1, 2));
  CHECK(two.j.size() == 2);
  CHECK(is_embedding(two.i, 0).ok);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(is_embedding(two.j[k], 0).ok);
    CHECK(two.certificates[k][0] <= q(1, 2));
  }
}
