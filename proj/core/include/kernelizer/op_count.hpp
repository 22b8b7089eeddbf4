#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace kernelizer {

/// Tally of scalar additions and multiplications. Products with a factor of
/// exactly 0 or 1 are never recorded in `muls`.
struct OpCount {
  std::uint64_t adds = 0;
  std::uint64_t muls = 0;

  OpCount& operator+=(const OpCount& o) noexcept {
    adds += o.adds;
    muls += o.muls;
    return *this;
  }
  friend OpCount operator+(OpCount a, const OpCount& b) noexcept { return a += b; }
  friend bool operator==(const OpCount&, const OpCount&) = default;
};

/// Reduced nonnegative fraction.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Ratio of(std::uint64_t num, std::uint64_t den);
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;

  friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// Factored-to-naive ratios: adds (C+) and muls (C*). An empty optional
/// means the naive count was zero and the ratio is undefined.
struct OpRatios {
  std::optional<Ratio> adds;
  std::optional<Ratio> muls;
};

OpRatios op_ratios(const OpCount& count, const OpCount& naive);

/// Result of a counted computation.
template <typename R>
struct Counted {
  R value;
  OpCount ops;
};

}  // namespace kernelizer
