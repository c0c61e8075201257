#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace msn {

using Rational = mpq_class;
using Integer = mpz_class;
using Vec = std::vector<Rational>;

// Parses "p/q" or an integer string; result is in lowest terms.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Vec& v);

Vec zeros(std::size_t n);
Vec unit_vector(std::size_t n, std::size_t i);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Vec& a, const Rational& s);
Vec negate(const Vec& a);
Vec concat(const Vec& a, const Vec& b);

bool is_zero(const Vec& v);
Rational max_abs(const Vec& v);

// Multiplies by the sign of the first nonzero entry so that it becomes positive.
Vec sign_canonical(Vec v);

// Scales v to the primitive integer vector on the same ray.
Vec primitive_direction(const Vec& v);

std::strong_ordering lex_compare(const Vec& a, const Vec& b);

struct LexLess {
  bool operator()(const Vec& a, const Vec& b) const { return lex_compare(a, b) < 0; }
};

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline Rational pow2_neg(unsigned k) {
  Rational r(1);
  mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), k);
  return r;
}

}  // namespace msn
