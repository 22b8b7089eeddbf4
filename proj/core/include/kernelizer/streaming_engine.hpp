#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "kernelizer/op_count.hpp"
#include "kernelizer/scheme.hpp"

namespace kernelizer {

/// Runs a scheme over a sample stream. Lanes 1..L hold kernel * sample,
/// lanes L+1..L+Q hold the shared sums; each lane keeps the last
/// sigma * (N + Delta) values in a ring. Columns and the cursor are 1-based.
template <Scalar T>
class StreamingEngine {
 public:
  explicit StreamingEngine(Scheme<T> scheme) : scheme_(std::move(scheme)) {
    validate(scheme_);
    cols_ = scheme_.buffer_columns();
    require(cols_ >= 1, ErrorCode::kMalformedScheme, "ring buffer has no columns");
    buffer_.assign(scheme_.lane_count() * static_cast<std::size_t>(cols_), T{});
    cursor_ = cols_;
  }

  const Scheme<T>& scheme() const noexcept { return scheme_; }
  std::size_t rows() const noexcept { return scheme_.lane_count(); }
  std::int64_t cols() const noexcept { return cols_; }
  std::int64_t cursor() const noexcept { return cursor_; }
  std::uint64_t samples_seen() const noexcept { return seen_; }
  std::size_t multiplies_per_sample() const noexcept { return scheme_.kernel_size(); }

  void reset() {
    std::fill(buffer_.begin(), buffer_.end(), T{});
    cursor_ = cols_;
    seen_ = 0;
  }

  /// Feeds one sample and returns the output snapshot taken after the
  /// combination pass.
  DenseTensor<T> push(const T& sample, OpCount* ops = nullptr) {
    cursor_ = 1 + cursor_ % cols_;
    ++seen_;
    const std::size_t L = scheme_.kernel_size();
    std::uint64_t muls = 0;
    for (std::size_t l = 0; l < L; ++l) {
      lane(l + 1, cursor_) = sample * scheme_.kernel[l];
      if (is_counted_product(sample, scheme_.kernel[l])) ++muls;
    }
    // Ascending ids: a zero-lag operand produced in this push is already in
    // place when it is read.
    for (const CombinationRow& row : scheme_.q)
      lane(row.id, cursor_) = lane(row.in1, column(row.d1)) + lane(row.in2, column(row.d2));

    DenseTensor<T> out(scheme_.r_index.shape());
    for (std::size_t i = 0; i < out.size(); ++i) {
      const Id r = scheme_.r_index[i];
      if (r != 0) out[i] = lane(r, column(scheme_.d_delay[i]));
    }
    if (ops) {
      ops->muls += muls;
      ops->adds += scheme_.q.size();
    }
    return out;
  }

 private:
  // 1 + (xi - 1 - d) mod cols with a nonnegative remainder.
  std::int64_t column(std::int64_t delay) const {
    const std::int64_t m = (cursor_ - 1 - delay) % cols_;
    return 1 + (m < 0 ? m + cols_ : m);
  }
  T& lane(Id id, std::int64_t col) {
    return buffer_[(id - 1) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(col - 1)];
  }

  Scheme<T> scheme_;
  std::int64_t cols_ = 1;
  std::int64_t cursor_ = 1;
  std::uint64_t seen_ = 0;
  std::vector<T> buffer_;
};

/// One snapshot per sample. With sigma > 1 the stream is channel-interleaved
/// (c1, c2, ..., c_sigma, c1, ...) and snapshot i belongs to channel i mod sigma.
template <Scalar T>
Counted<std::vector<DenseTensor<T>>> engine_run(const Scheme<T>& scheme,
                                                std::span<const T> stream) {
  StreamingEngine<T> engine(scheme);
  Counted<std::vector<DenseTensor<T>>> r;
  r.value.reserve(stream.size());
  for (const T& x : stream) r.value.push_back(engine.push(x, &r.ops));
  return r;
}

}  // namespace kernelizer
