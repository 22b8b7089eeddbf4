#include "kernelizer/op_count.hpp"

#include <numeric>

#include "kernelizer/error.hpp"

namespace kernelizer {

Ratio Ratio::of(std::uint64_t num, std::uint64_t den) {
  require(den != 0, ErrorCode::kInvalidArgument, "ratio denominator is zero");
  const std::uint64_t g = std::gcd(num, den);
  return g == 0 ? Ratio{0, 1} : Ratio{num / g, den / g};
}

std::string Ratio::to_string() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

OpRatios op_ratios(const OpCount& count, const OpCount& naive) {
  OpRatios r;
  if (naive.adds != 0) r.adds = Ratio::of(count.adds, naive.adds);
  if (naive.muls != 0) r.muls = Ratio::of(count.muls, naive.muls);
  return r;
}

}  // namespace kernelizer
