#pragma once

#include <cstddef>
#include <span>

#include "kernelizer/error.hpp"
#include "kernelizer/op_count.hpp"
#include "kernelizer/tensor.hpp"

// Dense reference products and their operation counts. The counts are the
// textbook dense ones (every product charged, N - 1 additions per output),
// which is what the factored counts are compared against.

namespace kernelizer {

inline OpCount naive_ops_tensor_vec(const Shape& shape, std::size_t axis) {
  const std::size_t n = shape.extent(axis);
  const std::size_t outputs = shape.size() / n;
  return {outputs * (n - 1), outputs * n};
}

/// All N circular shifts, each computed densely.
inline OpCount naive_ops_recursive(const Shape& shape, std::size_t axis) {
  OpCount one = naive_ops_tensor_vec(shape, axis);
  const std::size_t n = shape.extent(axis);
  return {one.adds * n, one.muls * n};
}

inline OpCount naive_ops_tensor_tensor(const Shape& t, const Shape& w, std::size_t shared) {
  const std::size_t s = t.outer(shared);
  const std::size_t outputs = (t.size() / s) * (w.size() / s);
  return {outputs * (s - 1), outputs * s};
}

template <Scalar T>
Counted<DenseTensor<T>> naive_tensor_vec(const DenseTensor<T>& t, std::span<const T> v,
                                         std::size_t axis) {
  require(axis < t.rank(), ErrorCode::kUnsupportedAxis, "axis out of range");
  require(t.shape().extent(axis) == v.size(), ErrorCode::kShapeMismatch,
          "vector length does not match tensor axis");
  const std::size_t outer = t.shape().outer(axis);
  const std::size_t len = v.size();
  const std::size_t inner = t.shape().inner(axis);
  DenseTensor<T> out(t.shape().without_axis(axis));
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < inner; ++i) {
      T acc{};
      for (std::size_t n = 0; n < len; ++n) acc += t[(o * len + n) * inner + i] * v[n];
      out[o * inner + i] = acc;
    }
  return {std::move(out), naive_ops_tensor_vec(t.shape(), axis)};
}

}  // namespace kernelizer
