#pragma once

#include <bit>
#include <complex>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <type_traits>

namespace kernelizer {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};
template <typename T>
inline constexpr bool is_complex_v = is_complex<T>::value;

/// Element types a tensor may carry. Equality is always exact: factorization
/// groups elements by bitwise-equal value, so floating data must be rounded
/// to a fixed precision first.
template <typename T>
concept Scalar = std::integral<T> || std::floating_point<T> ||
                 (is_complex_v<T> && std::floating_point<typename T::value_type>);

using Complex = std::complex<double>;

/// Combination / kernel identifier. 0 is reserved for "no term".
using Id = std::uint32_t;

template <Scalar T>
constexpr bool is_zero(const T& x) {
  return x == T{};
}

template <Scalar T>
constexpr bool is_one(const T& x) {
  return x == T{1};
}

/// A product is only charged as a multiplication when neither factor is
/// exactly 0 or exactly 1.
template <Scalar T>
constexpr bool is_counted_product(const T& a, const T& b) {
  return !(is_zero(a) || is_one(a) || is_zero(b) || is_one(b));
}

namespace detail {

inline std::size_t hash_real(double x) {
  // -0.0 and +0.0 compare equal; fold them before hashing the bits.
  x += 0.0;
  return std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(x));
}

}  // namespace detail

/// Hash consistent with exact scalar equality.
struct ScalarHash {
  template <Scalar T>
  std::size_t operator()(const T& x) const {
    if constexpr (std::integral<T>) {
      return std::hash<T>{}(x);
    } else if constexpr (std::floating_point<T>) {
      return detail::hash_real(static_cast<double>(x));
    } else {
      const std::size_t h1 = detail::hash_real(static_cast<double>(x.real()));
      const std::size_t h2 = detail::hash_real(static_cast<double>(x.imag()));
      return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
    }
  }
};

}  // namespace kernelizer
