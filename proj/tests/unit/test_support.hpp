#pragma once

#include "msn/matrix.hpp"
#include "msn/polytope.hpp"
#include "msn/rational.hpp"

#include <algorithm>
#include <initializer_list>
#include <vector>

namespace msn::test {

inline Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

inline Vec v(std::initializer_list<Rational> xs) { return Vec(xs); }

// Vertices of {x : a·x <= b} by solving every d-subset of constraints as
// equations and keeping the feasible solutions. Independent of the double
// description code.
inline std::vector<Vec> brute_force_vertices(const std::vector<Inequality>& ineqs, std::size_t d) {
  std::vector<Vec> out;
  const std::size_t m = ineqs.size();
  if (d == 0 || m < d) return out;
  std::vector<std::size_t> idx(d);
  for (std::size_t i = 0; i < d; ++i) idx[i] = i;
  for (;;) {
    Matrix a(d, d);
    Vec b(d);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) a(r, c) = ineqs[idx[r]].normal[c];
      b[r] = ineqs[idx[r]].bound;
    }
    if (determinant(a) != 0) {
      Vec x = inverse(a).apply(b);
      bool ok = std::all_of(ineqs.begin(), ineqs.end(), [&](const Inequality& in) { return dot(in.normal, x) <= in.bound; });
      if (ok) out.push_back(x);
    }
    std::size_t k = d;
    while (k > 0 && idx[k - 1] == m - d + k - 1) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < d; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::sort(out.begin(), out.end(), LexLess{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace msn::test
