#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "kernelizer/error.hpp"
#include "kernelizer/factorization.hpp"
#include "kernelizer/scalar.hpp"
#include "kernelizer/tensor.hpp"

// Synthesis of an adder-sharing streaming schedule from a factorized tensor.
//
// Timing model. A fiber of the commutator (a slice along the last axis, the
// time axis) with id k at position n contributes kernel[k] * x(t - (N-1-n)).
// A combination (a, b, gap) found at positions n and n + gap is rewritten as
// a single id at n + gap, so its ideal signal is a(t - gap) + b(t). With
// adder latency delta every combination c runs lambda_c clocks late;
// operand read lags absorb the difference so the lanes stay coherent, and
// the outputs are read with a lag that lines them all up at the common
// latency Delta = max lambda.

namespace kernelizer {

/// A shared two-input addition before delays are assigned.
struct Combination {
  Id id = 0;
  Id in1 = 0;
  Id in2 = 0;
  std::uint32_t gap = 0;

  friend bool operator==(const Combination&, const Combination&) = default;
};

/// Row of the combination matrix: operand read lags d1, d2 in clocks.
struct CombinationRow {
  Id id = 0;
  Id in1 = 0;
  Id in2 = 0;
  std::int64_t d1 = 0;
  std::int64_t d2 = 0;

  friend bool operator==(const CombinationRow&, const CombinationRow&) = default;
};

struct PatternSet {
  DenseTensor<Id> reduced;
  std::vector<Combination> combinations;
};

/// Greedy pair extraction. Repeatedly picks the (in1, in2, gap) triple with
/// the most non-overlapping occurrences (ties: smallest triple in
/// lexicographic order), zeroes the left element of each occurrence and
/// writes the new id gap positions to the right, until every last-axis fiber
/// holds at most one nonzero. New ids run from L + 1 upward.
PatternSet build_pattern_set(const DenseTensor<Id>& ymap, std::size_t kernel_size);

struct DelayPlan {
  std::vector<CombinationRow> q;
  /// Clocks by which each lane runs behind its ideal signal, indexed by id
  /// (entry 0 unused, kernel taps are 0).
  std::vector<std::int64_t> lateness;
  /// Largest lateness; the whole scheme's output latency in samples.
  std::int64_t delta = 0;
};

/// Assigns operand read lags for adders with a latency of `adder_delay`
/// clocks. Every lag is at least `adder_delay`.
DelayPlan adjust_delays(const std::vector<Combination>& combinations, std::size_t kernel_size,
                        std::int64_t adder_delay);

/// Scales every read lag by the channel count.
std::vector<CombinationRow> adjust_channels(std::vector<CombinationRow> q, std::int64_t sigma);

struct Readout {
  /// 1-based position of each fiber's nonzero, 0 for an all-zero fiber.
  DenseTensor<std::int64_t> position;
  DenseTensor<Id> r_index;
};

Readout compute_delays_indices(const DenseTensor<Id>& reduced);

struct SynthesisConfig {
  double epsilon = 1.0;
  std::int64_t adder_delay = 0;
  std::int64_t sigma = 1;
};

/// Everything the streaming engine and the netlist builder need. d_delay
/// holds the readout lag of every output cell in clocks; an output at
/// per-channel step t equals the direct sliding-window product at step
/// t - delta.
template <Scalar T>
struct Scheme {
  std::vector<T> kernel;
  std::vector<CombinationRow> q;
  DenseTensor<Id> r_index;
  DenseTensor<std::int64_t> d_delay;
  std::int64_t delta = 0;
  std::int64_t sigma = 1;
  std::size_t n_last = 1;
  std::int64_t adder_delay = 0;

  std::size_t kernel_size() const noexcept { return kernel.size(); }
  std::size_t combination_count() const noexcept { return q.size(); }
  std::size_t lane_count() const noexcept { return kernel.size() + q.size(); }
  std::int64_t buffer_columns() const noexcept {
    return sigma * (static_cast<std::int64_t>(n_last) + delta);
  }

  friend bool operator==(const Scheme&, const Scheme&) = default;
};

namespace detail {

void validate_scheme_layout(std::size_t kernel_size, const std::vector<CombinationRow>& q,
                            const DenseTensor<Id>& r_index,
                            const DenseTensor<std::int64_t>& d_delay, std::int64_t delta,
                            std::int64_t sigma, std::size_t n_last, std::int64_t adder_delay);

void validate_config(const SynthesisConfig& cfg);

}  // namespace detail

/// Rejects schemes whose ids, lags or shapes could not come from synthesis
/// or would alias in the ring buffer.
template <Scalar T>
void validate(const Scheme<T>& s) {
  for (const T& u : s.kernel)
    require(!is_zero(u), ErrorCode::kMalformedScheme, "scheme kernel contains a zero tap");
  detail::validate_scheme_layout(s.kernel.size(), s.q, s.r_index, s.d_delay, s.delta, s.sigma,
                                 s.n_last, s.adder_delay);
}

template <Scalar T>
Scheme<T> synthesize(const DenseTensor<T>& t, const SynthesisConfig& cfg) {
  detail::validate_config(cfg);
  const Factorization<T> f = factorize(round_to_precision(t, cfg.epsilon));
  const std::size_t L = f.kernel_size();
  PatternSet patterns = build_pattern_set(f.ymap, L);
  DelayPlan plan = adjust_delays(patterns.combinations, L, cfg.adder_delay);
  Readout readout = compute_delays_indices(patterns.reduced);

  Scheme<T> s;
  s.kernel = f.kernel;
  s.q = adjust_channels(std::move(plan.q), cfg.sigma);
  s.delta = plan.delta;
  s.sigma = cfg.sigma;
  s.n_last = f.shape().last();
  s.adder_delay = cfg.adder_delay;
  s.d_delay = DenseTensor<std::int64_t>(readout.position.shape(), 0);
  const auto n = static_cast<std::int64_t>(s.n_last);
  for (std::size_t i = 0; i < readout.position.size(); ++i) {
    const Id r = readout.r_index[i];
    if (r == 0) continue;
    s.d_delay[i] = cfg.sigma * (plan.delta + n - readout.position[i] - plan.lateness[r]);
  }
  s.r_index = std::move(readout.r_index);
  return s;
}

}  // namespace kernelizer
