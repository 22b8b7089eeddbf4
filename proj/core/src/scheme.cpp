#include "kernelizer/scheme.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>

namespace kernelizer {

namespace {

using Triple = std::tuple<Id, Id, std::uint32_t>;  // (in1, in2, gap)
using TripleCounts = std::map<Triple, std::uint64_t>;

// Non-overlapping occurrences of (a, b, gap) in one fiber, matched left to
// right; a match consumes both of its positions.
std::uint64_t count_occurrences(std::span<const Id> fiber, const Triple& t,
                                std::vector<char>& consumed) {
  const auto [a, b, gap] = t;
  std::fill(consumed.begin(), consumed.end(), 0);
  std::uint64_t count = 0;
  for (std::size_t n = 0; n + gap < fiber.size(); ++n) {
    if (consumed[n] || consumed[n + gap]) continue;
    if (fiber[n] == a && fiber[n + gap] == b) {
      consumed[n] = consumed[n + gap] = 1;
      ++count;
    }
  }
  return count;
}

// Only triples made of two nonzero entries of the fiber can occur at all, so
// they are the only ones worth counting.
TripleCounts fiber_counts(std::span<const Id> fiber, std::vector<char>& consumed) {
  std::vector<std::size_t> nz;
  for (std::size_t n = 0; n < fiber.size(); ++n)
    if (fiber[n] != 0) nz.push_back(n);
  TripleCounts counts;
  for (std::size_t i = 0; i < nz.size(); ++i)
    for (std::size_t j = i + 1; j < nz.size(); ++j)
      counts.emplace(Triple{fiber[nz[i]], fiber[nz[j]], static_cast<std::uint32_t>(nz[j] - nz[i])},
                     0);
  for (auto& [t, c] : counts) c = count_occurrences(fiber, t, consumed);
  return counts;
}

void add_counts(TripleCounts& totals, const TripleCounts& part) {
  for (const auto& [t, c] : part) totals[t] += c;
}

void remove_counts(TripleCounts& totals, const TripleCounts& part) {
  for (const auto& [t, c] : part) {
    auto it = totals.find(t);
    it->second -= c;
    if (it->second == 0) totals.erase(it);
  }
}

}  // namespace

PatternSet build_pattern_set(const DenseTensor<Id>& ymap, std::size_t kernel_size) {
  for (Id y : ymap.data())
    if (y > kernel_size) detail::index_out_of_range(y, kernel_size);
  PatternSet out{ymap, {}};
  DenseTensor<Id>& y = out.reduced;
  const std::size_t fibers = y.fiber_count();
  std::vector<char> consumed(y.shape().last());

  std::vector<TripleCounts> per_fiber(fibers);
  TripleCounts totals;
  for (std::size_t f = 0; f < fibers; ++f) {
    per_fiber[f] = fiber_counts(y.fiber(f), consumed);
    add_counts(totals, per_fiber[f]);
  }

  Id next = static_cast<Id>(kernel_size + 1);
  while (!totals.empty()) {
    // std::map iterates in (in1, in2, gap) order, so the first maximum is the
    // tie-break winner.
    auto best = totals.begin();
    for (auto it = totals.begin(); it != totals.end(); ++it)
      if (it->second > best->second) best = it;
    const Triple chosen = best->first;
    const auto [a, b, gap] = chosen;

    for (std::size_t f = 0; f < fibers; ++f) {
      if (!per_fiber[f].contains(chosen)) continue;
      auto fiber = y.fiber(f);
      for (std::size_t n = 0; n + gap < fiber.size(); ++n) {
        if (fiber[n] == a && fiber[n + gap] == b) {
          fiber[n] = 0;
          fiber[n + gap] = next;
        }
      }
      remove_counts(totals, per_fiber[f]);
      per_fiber[f] = fiber_counts(fiber, consumed);
      add_counts(totals, per_fiber[f]);
    }
    out.combinations.push_back({next, a, b, gap});
    ++next;
  }

  for (std::size_t f = 0; f < fibers; ++f) {
    const auto fiber = y.fiber(f);
    require(std::count_if(fiber.begin(), fiber.end(), [](Id v) { return v != 0; }) <= 1,
            ErrorCode::kInternal, "fiber " + std::to_string(f) + " did not collapse");
  }
  return out;
}

DelayPlan adjust_delays(const std::vector<Combination>& combinations, std::size_t kernel_size,
                        std::int64_t adder_delay) {
  require(adder_delay >= 0, ErrorCode::kInvalidArgument, "adder delay must be >= 0");
  DelayPlan plan;
  plan.lateness.assign(kernel_size + combinations.size() + 1, 0);
  for (std::size_t i = 0; i < combinations.size(); ++i) {
    const Combination& c = combinations[i];
    require(c.id == kernel_size + 1 + i, ErrorCode::kInvalidArgument,
            "combination ids must run contiguously from L + 1");
    require(c.in1 >= 1 && c.in1 < c.id && c.in2 >= 1 && c.in2 < c.id,
            ErrorCode::kInvalidArgument, "combination operands must precede the combination");
    const std::int64_t gap = c.gap;
    const std::int64_t la = plan.lateness[c.in1];
    const std::int64_t lb = plan.lateness[c.in2];
    // The adder fires once both operands are available at their required
    // alignment; in1 is wanted `gap` clocks in the past, in2 now.
    const std::int64_t lc = adder_delay + std::max<std::int64_t>({0, la - gap, lb});
    plan.lateness[c.id] = lc;
    plan.q.push_back({c.id, c.in1, c.in2, lc + gap - la, lc - lb});
    plan.delta = std::max(plan.delta, lc);
  }
  return plan;
}

std::vector<CombinationRow> adjust_channels(std::vector<CombinationRow> q, std::int64_t sigma) {
  require(sigma >= 1, ErrorCode::kInvalidArgument, "channel count must be >= 1");
  for (auto& row : q) {
    row.d1 *= sigma;
    row.d2 *= sigma;
  }
  return q;
}

Readout compute_delays_indices(const DenseTensor<Id>& reduced) {
  const Shape shape = reduced.shape().without_axis(reduced.rank() - 1);
  Readout r{DenseTensor<std::int64_t>(shape, 0), DenseTensor<Id>(shape, 0)};
  for (std::size_t f = 0; f < reduced.fiber_count(); ++f) {
    const auto fiber = reduced.fiber(f);
    for (std::size_t n = 0; n < fiber.size(); ++n) {
      if (fiber[n] == 0) continue;
      require(r.r_index[f] == 0, ErrorCode::kInvalidArgument,
              "fiber " + std::to_string(f) + " holds more than one nonzero");
      r.r_index[f] = fiber[n];
      r.position[f] = static_cast<std::int64_t>(n + 1);
    }
  }
  return r;
}

namespace detail {

void validate_config(const SynthesisConfig& cfg) {
  require(std::isfinite(cfg.epsilon) && cfg.epsilon > 0, ErrorCode::kInvalidPrecision,
          "precision must be a positive finite number");
  require(cfg.adder_delay >= 0, ErrorCode::kInvalidArgument, "adder delay must be >= 0");
  require(cfg.sigma >= 1, ErrorCode::kInvalidArgument, "channel count must be >= 1");
}

void validate_scheme_layout(std::size_t kernel_size, const std::vector<CombinationRow>& q,
                            const DenseTensor<Id>& r_index,
                            const DenseTensor<std::int64_t>& d_delay, std::int64_t delta,
                            std::int64_t sigma, std::size_t n_last, std::int64_t adder_delay) {
  const auto bad = [](const std::string& what) { fail(ErrorCode::kMalformedScheme, what); };
  if (sigma < 1) bad("sigma must be >= 1");
  if (n_last < 1) bad("n_last must be >= 1");
  if (delta < 0) bad("delta must be >= 0");
  if (adder_delay < 0) bad("adder_delay must be >= 0");
  const std::int64_t cols = sigma * (static_cast<std::int64_t>(n_last) + delta);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const CombinationRow& row = q[i];
    const std::string where = "combination row " + std::to_string(i + 1);
    if (row.id != kernel_size + 1 + i) bad(where + ": ids must run contiguously from L + 1");
    if (row.in1 < 1 || row.in1 >= row.id || row.in2 < 1 || row.in2 >= row.id)
      bad(where + ": operand does not precede the combination");
    if (row.d1 < 0 || row.d2 < 0 || row.d1 >= cols || row.d2 >= cols)
      bad(where + ": delay outside the ring buffer");
  }
  if (!(r_index.shape() == d_delay.shape())) bad("r_index and d_delay shapes differ");
  const std::size_t lanes = kernel_size + q.size();
  for (std::size_t i = 0; i < r_index.size(); ++i) {
    if (r_index[i] > lanes) bad("r_index refers to an unknown id " + std::to_string(r_index[i]));
    if (d_delay[i] < 0 || d_delay[i] >= cols) bad("d_delay outside the ring buffer");
  }
}

}  // namespace detail

}  // namespace kernelizer
