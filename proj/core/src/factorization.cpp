#include "kernelizer/factorization.hpp"

#include <cmath>

namespace kernelizer {

bool uniqueness_bound(const Shape& shape, std::size_t kernel_size) {
  require(shape.rank() >= 2, ErrorCode::kNotApplicable,
          "uniqueness bound needs a tensor of rank >= 2");
  require(kernel_size >= 1, ErrorCode::kInvalidArgument, "kernel size must be >= 1");
  // Compare in log space; the right-hand side overflows quickly.
  const double rows = std::log(static_cast<double>(shape.outer(shape.rank() - 1)));
  const double words =
      static_cast<double>(shape.last()) * std::log(static_cast<double>(kernel_size));
  if (std::abs(rows - words) > 1e-9) return rows < words;

  // Near equality: settle it exactly with saturating integer arithmetic.
  const std::size_t lhs = shape.outer(shape.rank() - 1);
  std::size_t rhs = 1;
  for (std::size_t i = 0; i < shape.last(); ++i) {
    if (rhs > lhs) break;
    rhs *= kernel_size;
  }
  return lhs <= rhs;
}

}  // namespace kernelizer
