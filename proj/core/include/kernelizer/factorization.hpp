#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "kernelizer/error.hpp"
#include "kernelizer/scalar.hpp"
#include "kernelizer/tensor.hpp"

namespace kernelizer {

/// Kernel of distinct nonzero values plus the compact commutator: ymap holds
/// 0 where the source element was zero and k in [1, L] where it equals
/// kernel[k - 1].
template <Scalar T>
struct Factorization {
  std::vector<T> kernel;
  DenseTensor<Id> ymap;

  std::size_t kernel_size() const noexcept { return kernel.size(); }
  const Shape& shape() const noexcept { return ymap.shape(); }

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

namespace detail {

template <std::integral T>
T round_integral(T x, T step) {
  const T q = x / step;
  const T r = x % step;
  if (r == 0) return x;
  // Half away from zero: |r| >= step / 2 rounds outward.
  const auto twice = static_cast<long double>(r < 0 ? -r : r) * 2;
  T n = q;
  if (twice >= static_cast<long double>(step)) n += (x < 0 ? -1 : 1);
  return n * step;
}

template <std::floating_point T>
T round_real(T x, T step) {
  return step * std::round(x / step) + T{0};
}

[[noreturn]] inline void index_out_of_range(Id y, std::size_t L) {
  fail(ErrorCode::kCorruptFactorization, "commutator index " + std::to_string(y) +
                                             " exceeds kernel size " + std::to_string(L));
}

}  // namespace detail

/// Replaces every element by eps * round(element / eps), rounding halves away
/// from zero; complex elements are rounded componentwise. Integer tensors
/// accept only integral eps.
template <Scalar T>
DenseTensor<T> round_to_precision(const DenseTensor<T>& t, double epsilon) {
  require(std::isfinite(epsilon) && epsilon > 0.0, ErrorCode::kInvalidPrecision,
          "precision must be a positive finite number");
  DenseTensor<T> out = t;
  if constexpr (std::integral<T>) {
    require(epsilon == std::floor(epsilon) &&
                epsilon <= static_cast<double>(std::numeric_limits<T>::max()),
            ErrorCode::kInvalidPrecision,
            "integer tensors require an integral precision");
    const auto step = static_cast<T>(epsilon);
    if (step == 1) return out;
    for (auto& x : out.data()) x = detail::round_integral<T>(x, step);
  } else if constexpr (std::floating_point<T>) {
    const auto step = static_cast<T>(epsilon);
    for (auto& x : out.data()) x = detail::round_real<T>(x, step);
  } else {
    using R = typename T::value_type;
    const auto step = static_cast<R>(epsilon);
    for (auto& x : out.data())
      x = T(detail::round_real<R>(x.real(), step), detail::round_real<R>(x.imag(), step));
  }
  return out;
}

/// Kernel in first-occurrence order of a row-major walk (outermost index
/// slowest). Zero tensors yield an empty kernel.
template <Scalar T>
Factorization<T> factorize(const DenseTensor<T>& t) {
  Factorization<T> f{{}, DenseTensor<Id>(t.shape(), Id{0})};
  std::unordered_map<T, Id, ScalarHash> index;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const T& x = t[i];
    if (is_zero(x)) continue;
    auto [it, inserted] = index.try_emplace(x, static_cast<Id>(f.kernel.size() + 1));
    if (inserted) {
      require(f.kernel.size() < std::numeric_limits<Id>::max() - 1, ErrorCode::kInternal,
              "kernel size exceeds identifier range");
      f.kernel.push_back(x);
    }
    f.ymap[i] = it->second;
  }
  return f;
}

/// Checks the invariants a factorization must satisfy before use.
template <Scalar T>
void validate(const Factorization<T>& f) {
  const std::size_t L = f.kernel.size();
  std::vector<bool> used(L + 1, false);
  for (Id y : f.ymap.data()) {
    if (y > L) detail::index_out_of_range(y, L);
    used[y] = true;
  }
  std::unordered_map<T, std::size_t, ScalarHash> seen;
  for (std::size_t k = 0; k < L; ++k) {
    if (is_zero(f.kernel[k]))
      fail(ErrorCode::kCorruptFactorization, "kernel entry " + std::to_string(k + 1) + " is zero");
    if (!used[k + 1])
      fail(ErrorCode::kCorruptFactorization,
           "kernel entry " + std::to_string(k + 1) + " is never referenced");
    if (!seen.emplace(f.kernel[k], k).second)
      fail(ErrorCode::kCorruptFactorization, "kernel entries must be pairwise distinct");
  }
}

/// Element n of the result is 0 when ymap[n] == 0, else kernel[ymap[n] - 1].
template <Scalar T>
DenseTensor<T> reconstruct(const Factorization<T>& f) {
  DenseTensor<T> out(f.ymap.shape());
  const std::size_t L = f.kernel.size();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Id y = f.ymap[i];
    if (y > L) detail::index_out_of_range(y, L);
    if (y != 0) out[i] = f.kernel[y - 1];
  }
  return out;
}

/// Expanded 0/1 commutator with one extra trailing axis of extent L. Only
/// meant for diagnostics; an empty kernel is represented by a trailing
/// extent of 1 holding zeros.
template <Scalar T>
DenseTensor<std::uint8_t> expand_commutator(const Factorization<T>& f) {
  const std::size_t L = f.kernel.size();
  const std::size_t width = L == 0 ? 1 : L;
  DenseTensor<std::uint8_t> z(f.ymap.shape().with_trailing(width), std::uint8_t{0});
  for (std::size_t i = 0; i < f.ymap.size(); ++i) {
    const Id y = f.ymap[i];
    if (y > L) detail::index_out_of_range(y, L);
    if (y != 0) z[i * width + (y - 1)] = 1;
  }
  return z;
}

/// True when the rows (sub-tensors over the leading axes) of a tensor with
/// this shape can all be distinct given a kernel of size K.
bool uniqueness_bound(const Shape& shape, std::size_t kernel_size);

struct KernelSizeBound {
  /// floor((max - min) / eps), the bound as usually stated; for complex data
  /// the product of the real-part and imaginary-part kernel sizes.
  std::size_t stated = 0;
  /// Number of nonzero points of the eps-grid inside the value range (the
  /// bounding box for complex data). Always an upper bound on the kernel size.
  std::size_t grid = 0;
};

namespace detail {

inline std::size_t grid_points(double lo, double hi, double epsilon) {
  return static_cast<std::size_t>(std::llround((hi - lo) / epsilon)) + 1;
}

}  // namespace detail

/// Diagnostic bounds on the kernel size of an eps-rounded tensor.
template <Scalar T>
KernelSizeBound kernel_size_bound(const DenseTensor<T>& rounded, double epsilon) {
  require(std::isfinite(epsilon) && epsilon > 0.0, ErrorCode::kInvalidPrecision,
          "precision must be a positive finite number");
  KernelSizeBound bound;
  if constexpr (is_complex_v<T>) {
    double re_lo = rounded[0].real(), re_hi = re_lo;
    double im_lo = rounded[0].imag(), im_hi = im_lo;
    DenseTensor<double> re(rounded.shape()), im(rounded.shape());
    for (std::size_t i = 0; i < rounded.size(); ++i) {
      re[i] = rounded[i].real();
      im[i] = rounded[i].imag();
      re_lo = std::min(re_lo, re[i]);
      re_hi = std::max(re_hi, re[i]);
      im_lo = std::min(im_lo, im[i]);
      im_hi = std::max(im_hi, im[i]);
    }
    bound.stated = factorize(re).kernel_size() * factorize(im).kernel_size();
    const bool origin_inside = re_lo <= 0 && re_hi >= 0 && im_lo <= 0 && im_hi >= 0;
    bound.grid = detail::grid_points(re_lo, re_hi, epsilon) *
                     detail::grid_points(im_lo, im_hi, epsilon) -
                 (origin_inside ? 1 : 0);
  } else {
    double lo = static_cast<double>(rounded[0]), hi = lo;
    for (const T& x : rounded.data()) {
      lo = std::min(lo, static_cast<double>(x));
      hi = std::max(hi, static_cast<double>(x));
    }
    bound.stated = static_cast<std::size_t>(std::llround((hi - lo) / epsilon));
    bound.grid = detail::grid_points(lo, hi, epsilon) - (lo <= 0 && hi >= 0 ? 1 : 0);
  }
  return bound;
}

}  // namespace kernelizer
