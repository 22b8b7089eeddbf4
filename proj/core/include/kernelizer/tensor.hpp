#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kernelizer/error.hpp"
#include "kernelizer/scalar.hpp"

namespace kernelizer {

/// Extents of a dense tensor, outermost first. Rank is at least one and every
/// extent is positive.
class Shape {
 public:
  Shape() : dims_{1} {}
  Shape(std::initializer_list<std::size_t> dims);
  explicit Shape(std::vector<std::size_t> dims);

  std::size_t rank() const noexcept { return dims_.size(); }
  std::size_t extent(std::size_t axis) const { return dims_.at(axis); }
  std::size_t last() const noexcept { return dims_.back(); }
  std::span<const std::size_t> dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return size_; }

  /// Product of the extents before / after `axis`.
  std::size_t outer(std::size_t axis) const;
  std::size_t inner(std::size_t axis) const;

  std::size_t offset(std::span<const std::size_t> index) const;
  std::vector<std::size_t> unravel(std::size_t flat) const;

  /// Shape with `axis` removed. Removing the only axis yields {1}.
  Shape without_axis(std::size_t axis) const;
  Shape with_leading(std::size_t extent) const;
  Shape with_trailing(std::size_t extent) const;

  std::string to_string() const;

  friend bool operator==(const Shape&, const Shape&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::size_t size_ = 1;
};

/// Row-major dense storage; the last axis varies fastest.
template <typename T>
class DenseTensor {
 public:
  DenseTensor() : data_(1) {}
  explicit DenseTensor(Shape shape, T fill = T{})
      : shape_(std::move(shape)), data_(shape_.size(), fill) {}
  DenseTensor(Shape shape, std::vector<T> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    require(data_.size() == shape_.size(), ErrorCode::kInvalidShape,
            "tensor data length " + std::to_string(data_.size()) +
                " does not match shape " + shape_.to_string());
  }

  static DenseTensor vector(std::vector<T> values) {
    Shape shape{values.size()};
    return DenseTensor(std::move(shape), std::move(values));
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.rank(); }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const T> data() const noexcept { return data_; }
  std::span<T> data() noexcept { return data_; }
  const std::vector<T>& values() const noexcept { return data_; }

  const T& operator[](std::size_t flat) const { return data_[flat]; }
  T& operator[](std::size_t flat) { return data_[flat]; }

  const T& at(std::span<const std::size_t> index) const {
    return data_[shape_.offset(index)];
  }
  T& at(std::span<const std::size_t> index) { return data_[shape_.offset(index)]; }
  const T& at(std::initializer_list<std::size_t> index) const {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }
  T& at(std::initializer_list<std::size_t> index) {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }

  /// Number of last-axis fibers and a view of fiber `f`.
  std::size_t fiber_count() const noexcept { return data_.size() / shape_.last(); }
  std::span<const T> fiber(std::size_t f) const {
    return std::span<const T>(data_).subspan(f * shape_.last(), shape_.last());
  }
  std::span<T> fiber(std::size_t f) {
    return std::span<T>(data_).subspan(f * shape_.last(), shape_.last());
  }

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  Shape shape_;
  std::vector<T> data_;
};

/// Reorders axes so that output axis i is input axis `order[i]`.
template <typename T>
DenseTensor<T> permute(const DenseTensor<T>& t, std::span<const std::size_t> order) {
  const std::size_t rank = t.rank();
  require(order.size() == rank, ErrorCode::kInvalidArgument,
          "permutation length must equal tensor rank");
  std::vector<bool> seen(rank, false);
  std::vector<std::size_t> dims(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    require(order[i] < rank && !seen[order[i]], ErrorCode::kInvalidArgument,
            "invalid axis permutation");
    seen[order[i]] = true;
    dims[i] = t.shape().extent(order[i]);
  }
  DenseTensor<T> out{Shape(std::move(dims))};
  std::vector<std::size_t> src(rank);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    const auto dst = out.shape().unravel(flat);
    for (std::size_t i = 0; i < rank; ++i) src[order[i]] = dst[i];
    out[flat] = t.at(src);
  }
  return out;
}

}  // namespace kernelizer
