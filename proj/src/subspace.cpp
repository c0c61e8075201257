#include "msn/subspace.hpp"

#include "msn/error.hpp"

namespace msn {

std::vector<Vec> sum_spans(const std::vector<Vec>& a, const std::vector<Vec>& b, std::size_t ambient) {
  std::vector<Vec> all = a;
  all.insert(all.end(), b.begin(), b.end());
  if (all.empty()) return {};
  return row_space_basis(Matrix::from_rows(all, ambient));
}

std::vector<Vec> intersect_all(const std::vector<std::vector<Vec>>& spaces, std::size_t ambient) {
  std::vector<Vec> cur;
  for (std::size_t i = 0; i < ambient; ++i) cur.push_back(unit_vector(ambient, i));
  for (const auto& s : spaces) {
    if (cur.empty()) break;
    cur = intersect_spans(cur, s, ambient);
  }
  return cur;
}

bool span_contains(const std::vector<Vec>& outer, const std::vector<Vec>& inner, std::size_t ambient) {
  if (inner.empty()) return true;
  std::size_t r = outer.empty() ? 0 : rank(Matrix::from_rows(outer, ambient));
  return sum_spans(outer, inner, ambient).size() == r;
}

SubspaceReport subspace_ops(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::DimensionMismatch, "subspace operations need matrices of equal shape");
  SubspaceReport r;
  const std::size_t n = a.cols(), m = a.rows();
  r.kernel_a = kernel_basis(a);
  r.kernel_b = kernel_basis(b);
  r.kernel_intersection = intersect_spans(r.kernel_a, r.kernel_b, n);
  r.image_a = image_basis(a);
  r.image_b = image_basis(b);
  r.image_intersection = intersect_spans(r.image_a, r.image_b, m);
  r.image_sum = sum_spans(r.image_a, r.image_b, m);
  r.dim_kernel_a = r.kernel_a.size();
  r.dim_kernel_b = r.kernel_b.size();
  r.dim_kernel_intersection = r.kernel_intersection.size();
  r.dim_kernel_sum = sum_spans(r.kernel_a, r.kernel_b, n).size();
  r.dim_image_a = r.image_a.size();
  r.dim_image_b = r.image_b.size();
  r.dim_image_intersection = r.image_intersection.size();
  r.dim_image_sum = r.image_sum.size();
  return r;
}

}  // namespace msn
