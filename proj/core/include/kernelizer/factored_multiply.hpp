#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kernelizer/error.hpp"
#include "kernelizer/factorization.hpp"
#include "kernelizer/op_count.hpp"
#include "kernelizer/product_table.hpp"
#include "kernelizer/tensor.hpp"

// Products of a factorized tensor with a vector or another factorized
// tensor. Multiplications happen only while filling a product table (or the
// kernel outer product for tensor-tensor); everything after that is table
// lookups and additions. Axes are 0-based here.

namespace kernelizer {

namespace detail {

inline void check_axis(const Shape& shape, std::size_t axis) {
  require(axis < shape.rank(), ErrorCode::kUnsupportedAxis,
          "axis " + std::to_string(axis) + " out of range for rank " +
              std::to_string(shape.rank()));
}

inline void check_length(const Shape& shape, std::size_t axis, std::size_t n) {
  require(shape.extent(axis) == n, ErrorCode::kShapeMismatch,
          "vector length " + std::to_string(n) + " does not match extent " +
              std::to_string(shape.extent(axis)) + " of axis " + std::to_string(axis));
}

// out[o, i] = sum_n P(ymap[o, n, i] - 1, n); `table` is anything with at(l, n).
template <Scalar T, typename Table>
void contract_axis(const Factorization<T>& f, std::size_t axis, const Table& table,
                   std::span<T> out, OpCount& ops) {
  const Shape& s = f.shape();
  const std::size_t outer = s.outer(axis);
  const std::size_t len = s.extent(axis);
  const std::size_t inner = s.inner(axis);
  const auto y = f.ymap.data();
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < inner; ++i) {
      T acc{};
      std::uint64_t terms = 0;
      const std::size_t base = o * len * inner + i;
      for (std::size_t n = 0; n < len; ++n) {
        const Id id = y[base + n * inner];
        if (id == 0) continue;
        acc += table.at(id - 1, n);
        ++terms;
      }
      out[o * inner + i] = acc;
      if (terms > 1) ops.adds += terms - 1;
    }
}

}  // namespace detail

/// Contraction of T with v along `axis`; the axis is removed from the result
/// (a vector contracts to shape {1}).
template <Scalar T>
Counted<DenseTensor<T>> tensor_vec(const Factorization<T>& f, std::span<const T> v,
                                   std::size_t axis) {
  detail::check_axis(f.shape(), axis);
  detail::check_length(f.shape(), axis, v.size());
  Counted<DenseTensor<T>> r{DenseTensor<T>(f.shape().without_axis(axis)), {}};
  const ProductTable<T> table(f.kernel, v, &r.ops);
  detail::contract_axis(f, axis, table, r.value.data(), r.ops);
  return r;
}

template <Scalar T>
Counted<T> dot_factored(const Factorization<T>& f, std::span<const T> v) {
  require(f.shape().rank() == 1, ErrorCode::kShapeMismatch, "dot product needs a vector");
  auto r = tensor_vec(f, v, 0);
  return {r.value[0], r.ops};
}

template <Scalar T>
Counted<DenseTensor<T>> matvec_factored(const Factorization<T>& f, std::span<const T> v) {
  require(f.shape().rank() == 2, ErrorCode::kShapeMismatch, "matvec needs a matrix");
  return tensor_vec(f, v, 1);
}

/// Products with every circular shift of v: slice k along the new leading
/// axis is tensor_vec(T, v shifted up by k), i.e. element n of the shifted
/// vector is v[(n + k) mod N]. A single product table serves all shifts. For
/// a vector the result is just the N shifted dot products.
template <Scalar T>
Counted<DenseTensor<T>> recursive_tensor_vec(const Factorization<T>& f, std::span<const T> v,
                                             std::size_t axis) {
  detail::check_axis(f.shape(), axis);
  detail::check_length(f.shape(), axis, v.size());
  const std::size_t n = v.size();
  const Shape rest = f.shape().without_axis(axis);
  const Shape shape = f.shape().rank() == 1 ? Shape{n} : rest.with_leading(n);
  Counted<DenseTensor<T>> r{DenseTensor<T>(shape), {}};
  const ProductTable<T> table(f.kernel, v, &r.ops);
  for (std::size_t k = 0; k < n; ++k) {
    const ShiftState<T> shifted(table, k);
    detail::contract_axis(f, axis, shifted, r.value.data().subspan(k * rest.size(), rest.size()),
                          r.ops);
  }
  return r;
}

template <Scalar T>
Counted<DenseTensor<T>> recursive_dot(const Factorization<T>& f, std::span<const T> v) {
  require(f.shape().rank() == 1, ErrorCode::kShapeMismatch, "dot product needs a vector");
  return recursive_tensor_vec(f, v, 0);
}

/// M x N result whose column k is T times v shifted up by k.
template <Scalar T>
Counted<DenseTensor<T>> recursive_matvec(const Factorization<T>& f, std::span<const T> v) {
  require(f.shape().rank() == 2, ErrorCode::kShapeMismatch, "matvec needs a matrix");
  auto shifts = recursive_tensor_vec(f, v, 1);
  const std::size_t order[] = {1, 0};
  return {permute(shifts.value, order), shifts.ops};
}

/// Window sized for streaming products with `f` along its last axis.
template <Scalar T>
SlidingWindow<T> make_window(const Factorization<T>& f) {
  return SlidingWindow<T>(f.kernel_size(), f.shape().last());
}

/// One streaming step: `sample` enters the window as its newest column and
/// the result is the contraction of T with the last N samples (older
/// positions zero until N samples have arrived). Only the last axis can
/// slide.
template <Scalar T>
Counted<DenseTensor<T>> iterative_tensor_vec_step(SlidingWindow<T>& window,
                                                  const Factorization<T>& f, const T& sample,
                                                  std::size_t axis) {
  detail::check_axis(f.shape(), axis);
  require(axis + 1 == f.shape().rank(), ErrorCode::kUnsupportedAxis,
          "streaming products slide along the last axis only; permute the tensor first");
  require(window.rows() == f.kernel_size() && window.cols() == f.shape().last(),
          ErrorCode::kShapeMismatch, "window does not match the factorization");
  Counted<DenseTensor<T>> r{DenseTensor<T>(f.shape().without_axis(axis)), {}};
  window.push(f.kernel, sample, &r.ops);
  detail::contract_axis(f, axis, window, r.value.data(), r.ops);
  return r;
}

template <Scalar T>
Counted<T> iterative_dot_step(SlidingWindow<T>& window, const Factorization<T>& f,
                              const T& sample) {
  require(f.shape().rank() == 1, ErrorCode::kShapeMismatch, "dot product needs a vector");
  auto r = iterative_tensor_vec_step(window, f, sample, 0);
  return {r.value[0], r.ops};
}

template <Scalar T>
Counted<DenseTensor<T>> iterative_matvec_step(SlidingWindow<T>& window,
                                              const Factorization<T>& f, const T& sample) {
  require(f.shape().rank() == 2, ErrorCode::kShapeMismatch, "matvec needs a matrix");
  return iterative_tensor_vec_step(window, f, sample, 1);
}

/// Contraction of T and W over their first `shared` axes, which must have
/// equal extents. The result has T's remaining axes followed by W's (shape
/// {1} when nothing remains). Scalar multiplications are limited to the
/// Lt x Lw kernel outer product; the commutators only steer additions.
template <Scalar T>
Counted<DenseTensor<T>> tensor_tensor(const Factorization<T>& ft, const Factorization<T>& fw,
                                      std::size_t shared) {
  const Shape& st = ft.shape();
  const Shape& sw = fw.shape();
  require(shared <= st.rank() && shared <= sw.rank(), ErrorCode::kShapeMismatch,
          "more shared axes than the tensors have");
  for (std::size_t a = 0; a < shared; ++a)
    require(st.extent(a) == sw.extent(a), ErrorCode::kShapeMismatch,
            "shared axis " + std::to_string(a) + " has extents " +
                std::to_string(st.extent(a)) + " and " + std::to_string(sw.extent(a)));

  std::vector<std::size_t> dims(st.dims().begin() + shared, st.dims().end());
  dims.insert(dims.end(), sw.dims().begin() + shared, sw.dims().end());
  if (dims.empty()) dims.push_back(1);

  const std::size_t s_count = st.outer(shared);
  const std::size_t a_count = st.size() / s_count;
  const std::size_t b_count = sw.size() / s_count;
  const std::size_t lt = ft.kernel_size(), lw = fw.kernel_size();

  Counted<DenseTensor<T>> r{DenseTensor<T>(Shape(std::move(dims))), {}};
  std::vector<T> u(lt * lw);
  for (std::size_t i = 0; i < lt; ++i)
    for (std::size_t j = 0; j < lw; ++j) {
      u[i * lw + j] = ft.kernel[i] * fw.kernel[j];
      if (is_counted_product(ft.kernel[i], fw.kernel[j])) ++r.ops.muls;
    }

  const auto yt = ft.ymap.data();
  const auto yw = fw.ymap.data();
  for (std::size_t a = 0; a < a_count; ++a)
    for (std::size_t b = 0; b < b_count; ++b) {
      T acc{};
      std::uint64_t terms = 0;
      for (std::size_t s = 0; s < s_count; ++s) {
        const Id i = yt[s * a_count + a];
        const Id j = yw[s * b_count + b];
        if (i == 0 || j == 0) continue;
        acc += u[(i - 1) * lw + (j - 1)];
        ++terms;
      }
      r.value[a * b_count + b] = acc;
      if (terms > 1) r.ops.adds += terms - 1;
    }
  return r;
}

namespace debug {

/// k-th power of the N x N displacement matrix: (C^k v)[n] = v[(n + k) mod N].
inline DenseTensor<int> displacement_matrix(std::size_t n, std::size_t k) {
  DenseTensor<int> c(Shape{n, n}, 0);
  for (std::size_t i = 0; i < n; ++i) c[i * n + (i + k) % n] = 1;
  return c;
}

/// One-hot vector of length m with the 1 at position `index`.
inline DenseTensor<int> selecting_vector(std::size_t m, std::size_t index) {
  require(index < m, ErrorCode::kInvalidArgument, "selecting index out of range");
  DenseTensor<int> e(Shape{m}, 0);
  e[index] = 1;
  return e;
}

/// E^t Y: contracts the first axis of a tensor with a selecting vector,
/// yielding the sub-tensor with leading index fixed.
template <typename V>
DenseTensor<V> select(const DenseTensor<int>& e, const DenseTensor<V>& y) {
  require(e.size() == y.shape().extent(0), ErrorCode::kShapeMismatch,
          "selecting vector length does not match leading extent");
  const Shape rest = y.shape().without_axis(0);
  DenseTensor<V> out(rest, V{});
  for (std::size_t m = 0; m < e.size(); ++m)
    for (std::size_t i = 0; i < rest.size(); ++i)
      out[i] += static_cast<V>(e[m]) * y[m * rest.size() + i];
  return out;
}

/// Plain matrix-vector product used to apply a displacement matrix.
template <Scalar T>
std::vector<T> apply(const DenseTensor<int>& c, std::span<const T> v) {
  const std::size_t n = c.shape().extent(0);
  std::vector<T> out(n, T{});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (c[i * v.size() + j] != 0) out[i] += static_cast<T>(c[i * v.size() + j]) * v[j];
  return out;
}

}  // namespace debug

}  // namespace kernelizer
