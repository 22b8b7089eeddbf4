#include "kernelizer/matched_filter.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "kernelizer/naive.hpp"

namespace kernelizer {

void FilterBankConfig::validate() const {
  require(bits_per_symbol >= 1 && sequence_symbols >= 1 && modulation_variants >= 1 &&
              samples_per_symbol >= 1,
          ErrorCode::kInvalidArgument, "filter bank parameters must all be >= 1");
  require(bits_per_symbol * sequence_symbols <= 24, ErrorCode::kInvalidArgument,
          "n_s * A_l must not exceed 24");
  require(std::isfinite(epsilon) && epsilon > 0, ErrorCode::kInvalidPrecision,
          "precision must be a positive finite number");
  require(static_cast<double>(rows()) * static_cast<double>(cols()) <= double(1 << 26),
          ErrorCode::kInvalidArgument, "filter bank too large");
}

std::size_t FilterBankConfig::rows() const {
  return static_cast<std::size_t>(modulation_variants)
         << (static_cast<std::size_t>(bits_per_symbol) * sequence_symbols);
}

std::size_t FilterBankConfig::cols() const {
  return static_cast<std::size_t>(sequence_symbols) * static_cast<std::size_t>(samples_per_symbol);
}

DenseTensor<Complex> normalize_rows(const DenseTensor<Complex>& t, std::size_t pivot) {
  require(t.rank() == 2, ErrorCode::kShapeMismatch, "normalization needs a matrix");
  const std::size_t m_count = t.shape().extent(0), n_count = t.shape().extent(1);
  require(pivot < n_count, ErrorCode::kInvalidArgument, "pivot column out of range");
  DenseTensor<Complex> out = t;
  for (std::size_t m = 0; m < m_count; ++m) {
    const Complex p = t[m * n_count + pivot];
    require(!is_zero(p), ErrorCode::kZeroPivot,
            "row " + std::to_string(m + 1) + " has a zero pivot element");
    for (std::size_t n = 0; n < n_count; ++n) out[m * n_count + n] = t[m * n_count + n] / p;
    out[m * n_count + pivot] = Complex(1.0, 0.0);
  }
  return out;
}

std::size_t symbol_of_row(std::size_t row, std::size_t rows_per_symbol) {
  require(row >= 1 && rows_per_symbol >= 1, ErrorCode::kInvalidArgument,
          "row and group size must be >= 1");
  return 1 + (row - 1) / rows_per_symbol;
}

namespace {

double window_energy(std::span<const Complex> window) {
  double e = 0;
  for (const Complex& v : window) e += std::norm(v);
  return e;
}

DemodReport report_for(const Complex& r, std::size_t row, std::size_t symbol, double v_energy,
                       double t_energy) {
  DemodReport rep;
  rep.argmax_row = row;
  rep.symbol = symbol;
  rep.phase = std::atan2(r.imag(), r.real());
  rep.power = std::norm(r);
  const double denom = v_energy * t_energy - rep.power;
  rep.snr = denom > 0 ? rep.power / denom : std::numeric_limits<double>::infinity();
  return rep;
}

// Index of the largest |r|, lowest index on ties; npos when all are zero.
std::size_t argmax_abs(std::span<const Complex> r) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_mag = 0;
  for (std::size_t m = 0; m < r.size(); ++m) {
    const double mag = std::abs(r[m]);
    if (mag > best_mag) {
      best_mag = mag;
      best = m;
    }
  }
  return best;
}

void check_bank(const Shape& shape, std::size_t window, std::size_t rows_per_symbol) {
  require(shape.rank() == 2, ErrorCode::kShapeMismatch, "filter bank must be a matrix");
  require(shape.extent(1) == window, ErrorCode::kShapeMismatch,
          "window length does not match the bank");
  require(rows_per_symbol >= 1 && shape.extent(0) % rows_per_symbol == 0,
          ErrorCode::kInvalidArgument, "bank rows are not a multiple of the group size");
}

}  // namespace

std::optional<DemodReport> decide(std::span<const Complex> r, std::span<const Complex> window,
                                  std::span<const double> row_energy,
                                  std::size_t rows_per_symbol) {
  const std::size_t m = argmax_abs(r);
  if (m == std::numeric_limits<std::size_t>::max()) return std::nullopt;
  return report_for(r[m], m + 1, symbol_of_row(m + 1, rows_per_symbol), window_energy(window),
                    row_energy[m]);
}

std::vector<double> row_energies(const Factorization<Complex>& bank) {
  const std::size_t rows = bank.ymap.fiber_count();
  std::vector<double> e(rows, 0.0);
  for (std::size_t m = 0; m < rows; ++m)
    for (Id y : bank.ymap.fiber(m))
      if (y != 0) e[m] += std::norm(bank.kernel[y - 1]);
  return e;
}

std::optional<DemodReport> demodulate(const Factorization<Complex>& bank,
                                      std::span<const Complex> window,
                                      std::size_t rows_per_symbol) {
  check_bank(bank.shape(), window.size(), rows_per_symbol);
  const auto r = matvec_factored(bank, window);
  return decide(r.value.data(), window, row_energies(bank), rows_per_symbol);
}

std::optional<DemodReport> demodulate_naive(const DenseTensor<Complex>& bank,
                                            std::span<const Complex> window,
                                            std::size_t rows_per_symbol) {
  check_bank(bank.shape(), window.size(), rows_per_symbol);
  const auto r = naive_tensor_vec(bank, window, 1);
  std::vector<double> energy(bank.fiber_count(), 0.0);
  for (std::size_t m = 0; m < energy.size(); ++m)
    for (const Complex& t : bank.fiber(m)) energy[m] += std::norm(t);
  return decide(r.value.data(), window, energy, rows_per_symbol);
}

std::optional<DemodReport> demodulate_grouped(const std::vector<Factorization<Complex>>& banks,
                                              std::span<const Complex> window) {
  require(!banks.empty(), ErrorCode::kInvalidArgument, "no symbol groups given");
  std::optional<DemodReport> best;
  double best_mag = 0;
  std::size_t offset = 0;
  const double v_energy = window_energy(window);
  for (std::size_t g = 0; g < banks.size(); ++g) {
    const auto& bank = banks[g];
    require(bank.shape().rank() == 2 && bank.shape().extent(1) == window.size(),
            ErrorCode::kShapeMismatch, "group bank does not match the window");
    const auto r = matvec_factored(bank, window);
    const std::size_t k = argmax_abs(r.value.data());
    if (k != std::numeric_limits<std::size_t>::max()) {
      const double mag = std::abs(r.value[k]);
      if (mag > best_mag) {
        best_mag = mag;
        best = report_for(r.value[k], offset + k + 1, g + 1, v_energy, row_energies(bank)[k]);
      }
    }
    offset += bank.shape().extent(0);
  }
  return best;
}

std::vector<DenseTensor<Complex>> split_groups(const DenseTensor<Complex>& bank,
                                               std::size_t rows_per_symbol) {
  check_bank(bank.shape(), bank.shape().last(), rows_per_symbol);
  const std::size_t n = bank.shape().last();
  const std::size_t groups = bank.shape().extent(0) / rows_per_symbol;
  std::vector<DenseTensor<Complex>> out;
  for (std::size_t g = 0; g < groups; ++g) {
    const auto begin = bank.values().begin() + static_cast<std::ptrdiff_t>(g * rows_per_symbol * n);
    out.emplace_back(Shape{rows_per_symbol, n},
                     std::vector<Complex>(begin, begin + static_cast<std::ptrdiff_t>(rows_per_symbol * n)));
  }
  return out;
}

DenseTensor<Complex> build_synthetic_bank(const FilterBankConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const std::size_t rows = cfg.rows(), cols = cfg.cols();

  // Alphabet size: enough distinct normalized patterns for twice the rows.
  const auto patterns = [cols](std::size_t p) {
    double count = 1;
    for (std::size_t n = 1; n < cols; ++n) count *= static_cast<double>(p);
    return count;
  };
  std::size_t p = 8;
  while (p < 1024 && patterns(p) < 2.0 * static_cast<double>(rows)) p *= 2;
  require(patterns(p) >= static_cast<double>(rows), ErrorCode::kInvalidArgument,
          "too few samples per row for " + std::to_string(rows) + " distinct rows");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, p - 1);
  std::uniform_real_distribution<double> rotation(0.0, 2.0 * std::numbers::pi);
  std::set<std::vector<std::size_t>> used;
  DenseTensor<Complex> bank(Shape{rows, cols});
  std::vector<std::size_t> k(cols), rel(cols);
  for (std::size_t m = 0; m < rows; ++m) {
    do {
      for (auto& x : k) x = pick(rng);
      for (std::size_t n = 0; n < cols; ++n) rel[n] = (k[n] + p - k[0]) % p;
    } while (!used.insert(rel).second);
    const double theta = rotation(rng);
    for (std::size_t n = 0; n < cols; ++n)
      bank[m * cols + n] =
          std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k[n]) / static_cast<double>(p) + theta);
  }
  return bank;
}

std::vector<Complex> matched_waveform(const DenseTensor<Complex>& bank, std::size_t row) {
  require(bank.rank() == 2 && row < bank.shape().extent(0), ErrorCode::kInvalidArgument,
          "row out of range");
  std::vector<Complex> w;
  for (const Complex& t : bank.fiber(row)) w.push_back(std::conj(t));
  return w;
}

StreamDemodulator::StreamDemodulator(Factorization<Complex> bank, std::size_t rows_per_symbol)
    : bank_(std::move(bank)), rows_per_symbol_(rows_per_symbol) {
  check_bank(bank_.shape(), bank_.shape().last(), rows_per_symbol);
  energy_ = row_energies(bank_);
  window_ = make_window(bank_);
  recent_.assign(bank_.shape().last(), Complex{});
}

std::optional<DemodReport> StreamDemodulator::push(const Complex& sample, OpCount* ops) {
  auto r = iterative_matvec_step(window_, bank_, sample);
  if (ops) *ops += r.ops;
  recent_[head_] = sample;
  head_ = (head_ + 1) % recent_.size();
  ++seen_;
  return decide(r.value.data(), recent_, energy_, rows_per_symbol_);
}

}  // namespace kernelizer
