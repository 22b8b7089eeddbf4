#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kernelizer/factored_multiply.hpp"
#include "kernelizer/factorization.hpp"
#include "kernelizer/tensor.hpp"

// Correlation receiver over a bank of conjugated reference waveforms. Rows
// are grouped by symbol: rows [(s-1)K + 1, sK] decode to symbol s.

namespace kernelizer {

struct FilterBankConfig {
  int bits_per_symbol = 1;     // n_s
  int sequence_symbols = 1;    // A_l
  int modulation_variants = 1; // A_m
  int samples_per_symbol = 1;  // A_s
  double epsilon = 1e-9;

  void validate() const;
  std::size_t symbols() const { return std::size_t{1} << bits_per_symbol; }
  /// A_m * 2^(n_s * A_l)
  std::size_t rows() const;
  /// A_l * A_s
  std::size_t cols() const;
  std::size_t rows_per_symbol() const { return rows() / symbols(); }
};

struct DemodReport {
  std::size_t symbol = 0;      // 1-based
  std::size_t argmax_row = 0;  // 1-based
  double phase = 0;
  double power = 0;
  double snr = 0;  // +inf when the denominator is not positive
};

/// Divides every row by its element in column `pivot` (0-based); that
/// column becomes exactly 1.
DenseTensor<Complex> normalize_rows(const DenseTensor<Complex>& t, std::size_t pivot);

/// Symbol of a 1-based row index for groups of `rows_per_symbol` rows.
std::size_t symbol_of_row(std::size_t row, std::size_t rows_per_symbol);

/// Builds the report from a correlation vector. Empty when every
/// correlation is zero.
std::optional<DemodReport> decide(std::span<const Complex> r, std::span<const Complex> window,
                                  std::span<const double> row_energy,
                                  std::size_t rows_per_symbol);

/// Sum of |t|^2 per row of a factorized bank (no scalar products needed
/// beyond the kernel's own magnitudes).
std::vector<double> row_energies(const Factorization<Complex>& bank);

std::optional<DemodReport> demodulate(const Factorization<Complex>& bank,
                                      std::span<const Complex> window,
                                      std::size_t rows_per_symbol);

/// Same decision from the dense bank without factorization.
std::optional<DemodReport> demodulate_naive(const DenseTensor<Complex>& bank,
                                            std::span<const Complex> window,
                                            std::size_t rows_per_symbol);

/// One factorized bank per symbol; the winning group is the one with the
/// largest correlation magnitude (ties to the lower group).
std::optional<DemodReport> demodulate_grouped(const std::vector<Factorization<Complex>>& banks,
                                              std::span<const Complex> window);

/// Splits a bank into consecutive groups of `rows_per_symbol` rows.
std::vector<DenseTensor<Complex>> split_groups(const DenseTensor<Complex>& bank,
                                               std::size_t rows_per_symbol);

/// Deterministic bank of unit-modulus PSK rows, each with a random global
/// phase and a distinct pattern once normalized by its first element.
DenseTensor<Complex> build_synthetic_bank(const FilterBankConfig& cfg, std::uint64_t seed);

/// Conjugate of a bank row: the waveform that row is matched to.
std::vector<Complex> matched_waveform(const DenseTensor<Complex>& bank, std::size_t row);

/// Sliding correlator: every pushed sample produces a decision over the last
/// N samples (zeros before the window has filled).
class StreamDemodulator {
 public:
  StreamDemodulator(Factorization<Complex> bank, std::size_t rows_per_symbol);

  std::optional<DemodReport> push(const Complex& sample, OpCount* ops = nullptr);
  std::uint64_t samples_seen() const noexcept { return seen_; }
  std::size_t window_length() const noexcept { return bank_.shape().last(); }

 private:
  Factorization<Complex> bank_;
  std::size_t rows_per_symbol_;
  std::vector<double> energy_;
  SlidingWindow<Complex> window_;
  std::vector<Complex> recent_;  // ring of the last N samples
  std::size_t head_ = 0;
  std::uint64_t seen_ = 0;
};

}  // namespace kernelizer
