#include "msn/space.hpp"

#include "msn/error.hpp"
#include "msn/subspace.hpp"

#include <bit>

namespace msn {

MultiSpace::MultiSpace() : MultiSpace(0, {Seminorm::zero(0)}, false) {}

MultiSpace::MultiSpace(std::size_t dim, std::vector<Seminorm> seminorms, bool graded) {
  if (seminorms.empty()) throw Error(ErrorKind::BadLength, "a multi-seminormed space needs at least one seminorm");
  for (const auto& s : seminorms)
    if (s.dim() != dim) throw Error(ErrorKind::DimensionMismatch, "seminorm dimension differs from space dimension");
  if (graded) {
    if (auto bad = graded_violation(seminorms)) {
      nlohmann::json w;
      w["level"] = bad->level;
      std::vector<std::string> xs;
      for (const auto& q : bad->witness) xs.push_back(to_string(q));
      w["vector"] = xs;
      throw Error(ErrorKind::NotGraded, "seminorm sequence is not graded", w);
    }
  }
  data_ = std::make_shared<const Data>(Data{dim, std::move(seminorms), graded});
}

MultiSpace MultiSpace::trivial() { return MultiSpace(0, {Seminorm::zero(0)}, true); }

MultiSpace MultiSpace::linf(std::size_t dim, std::size_t length) {
  return MultiSpace(dim, std::vector<Seminorm>(length, Seminorm::linf(dim)), true);
}

const Seminorm& MultiSpace::seminorm(std::size_t n) const {
  if (n >= length()) throw Error(ErrorKind::BadLevel, "level " + std::to_string(n) + " out of range");
  return data_->seminorms[n];
}

bool operator==(const MultiSpace& a, const MultiSpace& b) {
  return a.dim() == b.dim() && a.graded() == b.graded() && a.seminorms() == b.seminorms();
}

std::optional<GradedViolation> graded_violation(const std::vector<Seminorm>& seq) {
  for (std::size_t n = 0; n + 1 < seq.size(); ++n) {
    const Seminorm& lo = seq[n];
    const Seminorm& hi = seq[n + 1];
    for (const auto& k : hi.kernel())
      if (sgn(lo(k)) != 0) return GradedViolation{n, k};
    for (const auto& w : hi.ball_vertices())
      if (lo(w) > 1) return GradedViolation{n, w};
  }
  return std::nullopt;
}

bool is_graded_sequence(const std::vector<Seminorm>& seq) { return !graded_violation(seq).has_value(); }

std::string subset_key(std::size_t mask) {
  std::string key;
  for (std::size_t i = 0; mask >> i; ++i)
    if ((mask >> i) & 1U) {
      if (!key.empty()) key += ',';
      key += std::to_string(i);
    }
  return key;
}

std::vector<Vec> kernel_intersection(const MultiSpace& x, std::size_t mask) {
  std::vector<std::vector<Vec>> spaces;
  for (std::size_t i = 0; i < x.length(); ++i)
    if ((mask >> i) & 1U) spaces.push_back(x.seminorm(i).kernel());
  return intersect_all(spaces, x.dim());
}

KernelInvariant invariant_alpha(const MultiSpace& x) {
  const std::size_t l = x.length();
  if (l > 20) throw Error(ErrorKind::BadLength, "kernel invariant limited to 20 seminorms");
  const std::size_t subsets = std::size_t{1} << l;
  std::vector<std::vector<Vec>> ker(subsets);
  KernelInvariant inv{l, std::vector<std::size_t>(subsets)};
  for (std::size_t i = 0; i < x.dim(); ++i) ker[0].push_back(unit_vector(x.dim(), i));
  inv.alpha[0] = x.dim();
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    std::size_t low = static_cast<std::size_t>(std::countr_zero(mask));
    const auto& prev = ker[mask & (mask - 1)];
    ker[mask] = prev.empty() ? std::vector<Vec>{} : intersect_spans(prev, x.seminorm(low).kernel(), x.dim());
    inv.alpha[mask] = ker[mask].size();
  }
  return inv;
}

bool is_separated(const MultiSpace& x) {
  std::size_t full = (std::size_t{1} << x.length()) - 1;
  return kernel_intersection(x, full).empty();
}

MultiSpace extend_with_norm(const MultiSpace& x) {
  std::vector<Seminorm> seq = x.seminorms();
  Seminorm norm = Seminorm::linf(x.dim());
  if (x.graded()) norm = max_of(norm, seq.back());
  seq.push_back(norm);
  return MultiSpace(x.dim(), std::move(seq), x.graded());
}

MultiSpace truncate(const MultiSpace& x, std::size_t k) {
  if (k < 1 || k > x.length())
    throw Error(ErrorKind::BadLength, "truncation length " + std::to_string(k) + " out of range");
  std::vector<Seminorm> seq(x.seminorms().begin(), x.seminorms().begin() + static_cast<long>(k));
  bool graded = x.graded() || is_graded_sequence(seq);
  return MultiSpace(x.dim(), std::move(seq), graded);
}

MultiSpace graded_closure(const MultiSpace& x) {
  std::vector<Seminorm> seq;
  for (const auto& s : x.seminorms()) seq.push_back(seq.empty() ? s : max_of(seq.back(), s));
  return MultiSpace(x.dim(), std::move(seq), true);
}

MultiSpace product_space(const std::vector<MultiSpace>& factors, ProductMode mode) {
  if (factors.empty()) throw Error(ErrorKind::ArityMismatch, "product of no factors");
  if (factors.size() == 1) return factors.front();
  std::size_t total = 0;
  for (const auto& f : factors) total += f.dim();
  std::vector<Seminorm> seq;
  std::size_t offset = 0;
  for (const auto& f : factors) {
    Seminorm block = embed_block(f.seminorms().back(), total, offset);
    if (mode == ProductMode::GradedMax && !seq.empty()) {
      std::vector<Vec> fs = seq.back().functionals();
      fs.insert(fs.end(), block.functionals().begin(), block.functionals().end());
      block = Seminorm::trusted(total, std::move(fs));
    }
    seq.push_back(std::move(block));
    offset += f.dim();
  }
  return MultiSpace(total, std::move(seq), mode == ProductMode::GradedMax);
}

SeparatedQuotient separated_quotient(const MultiSpace& x) {
  std::vector<Vec> all;
  for (const auto& s : x.seminorms()) all.insert(all.end(), s.functionals().begin(), s.functionals().end());
  RowEchelon e = rref(Matrix::from_rows(all, x.dim()));
  const std::size_t r = e.pivots.size();
  Matrix projection(r, x.dim());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t c = 0; c < x.dim(); ++c) projection(i, c) = e.reduced(i, c);
  std::vector<Seminorm> seq;
  for (const auto& s : x.seminorms()) {
    std::vector<Vec> fs;
    for (const auto& phi : s.functionals()) {
      Vec a(r);
      for (std::size_t i = 0; i < r; ++i) a[i] = phi[e.pivots[i]];
      fs.push_back(std::move(a));
    }
    seq.push_back(Seminorm::make(r, std::move(fs)));
  }
  return {MultiSpace(r, std::move(seq), x.graded()), projection};
}

MultiSpace scale_space(const MultiSpace& x, const Rational& c) {
  if (sgn(c) <= 0) throw Error(ErrorKind::Format, "scale factor must be positive");
  std::vector<Seminorm> seq;
  for (const auto& s : x.seminorms()) seq.push_back(s.scaled(c));
  return MultiSpace(x.dim(), std::move(seq), x.graded());
}

}  // namespace msn
