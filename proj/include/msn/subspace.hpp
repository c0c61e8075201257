#pragma once

#include "msn/matrix.hpp"

#include <cstddef>
#include <vector>

namespace msn {

// Kernel and column-space data for a pair of matrices of the same shape.
struct SubspaceReport {
  std::vector<Vec> kernel_a, kernel_b, kernel_intersection;
  std::vector<Vec> image_a, image_b, image_intersection, image_sum;
  std::size_t dim_kernel_a = 0, dim_kernel_b = 0, dim_kernel_intersection = 0, dim_kernel_sum = 0;
  std::size_t dim_image_a = 0, dim_image_b = 0, dim_image_intersection = 0, dim_image_sum = 0;
};

// Throws DimensionMismatch unless a and b have the same shape.
SubspaceReport subspace_ops(const Matrix& a, const Matrix& b);

// Basis of span(a) + span(b).
std::vector<Vec> sum_spans(const std::vector<Vec>& a, const std::vector<Vec>& b, std::size_t ambient);

// Basis of the intersection of several subspaces, each given by a basis.
std::vector<Vec> intersect_all(const std::vector<std::vector<Vec>>& spaces, std::size_t ambient);

// True iff every vector of `inner` lies in span(outer).
bool span_contains(const std::vector<Vec>& outer, const std::vector<Vec>& inner, std::size_t ambient);

}  // namespace msn
