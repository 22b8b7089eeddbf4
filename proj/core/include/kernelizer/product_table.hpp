#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "kernelizer/error.hpp"
#include "kernelizer/op_count.hpp"
#include "kernelizer/scalar.hpp"

namespace kernelizer {

/// P[l][n] = kernel[l] * v[n]. Every multiplication a factored product can
/// need is made here exactly once.
template <Scalar T>
class ProductTable {
 public:
  ProductTable() = default;
  ProductTable(std::span<const T> kernel, std::span<const T> v, OpCount* ops = nullptr)
      : rows_(kernel.size()), cols_(v.size()), data_(kernel.size() * v.size()) {
    std::uint64_t muls = 0;
    for (std::size_t l = 0; l < rows_; ++l)
      for (std::size_t n = 0; n < cols_; ++n) {
        data_[l * cols_ + n] = kernel[l] * v[n];
        if (is_counted_product(kernel[l], v[n])) ++muls;
      }
    if (ops) ops->muls += muls;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const T& at(std::size_t l, std::size_t n) const { return data_[l * cols_ + n]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Logical rotation of a product table: column n of shift k reads base
/// column (n + k) mod N. Nothing is copied.
template <Scalar T>
class ShiftState {
 public:
  ShiftState(const ProductTable<T>& base, std::size_t shift)
      : base_(&base), shift_(base.cols() == 0 ? 0 : shift % base.cols()) {}

  std::size_t shift() const noexcept { return shift_; }
  std::size_t base_column(std::size_t n) const { return (n + shift_) % base_->cols(); }
  const T& at(std::size_t l, std::size_t n) const { return base_->at(l, base_column(n)); }

 private:
  const ProductTable<T>* base_;
  std::size_t shift_;
};

/// Product table of the last N stream samples. Pushing a sample drops the
/// oldest column and fills the newest (logical column N - 1) with
/// kernel * sample, which costs at most L multiplications.
template <Scalar T>
class SlidingWindow {
 public:
  SlidingWindow() = default;
  SlidingWindow(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T{}) {
    require(cols >= 1, ErrorCode::kInvalidArgument, "window needs at least one column");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  void push(std::span<const T> kernel, const T& sample, OpCount* ops = nullptr) {
    require(kernel.size() == rows_, ErrorCode::kShapeMismatch,
            "kernel length does not match window rows");
    const std::size_t col = head_;
    head_ = (head_ + 1) % cols_;
    std::uint64_t muls = 0;
    for (std::size_t l = 0; l < rows_; ++l) {
      data_[l * cols_ + col] = kernel[l] * sample;
      if (is_counted_product(kernel[l], sample)) ++muls;
    }
    if (ops) ops->muls += muls;
  }

  void reset() {
    std::fill(data_.begin(), data_.end(), T{});
    head_ = 0;
  }

  const T& at(std::size_t l, std::size_t n) const {
    return data_[l * cols_ + (head_ + n) % cols_];
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 1;
  std::vector<T> data_;
  std::size_t head_ = 0;  // physical column of logical column 0
};

}  // namespace kernelizer
