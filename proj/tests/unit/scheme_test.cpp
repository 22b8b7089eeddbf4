#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "kernelizer/scheme.hpp"
#include "oracles.hpp"

using namespace kernelizer;
using I = std::int64_t;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

using Term = std::pair<Id, std::int64_t>;  // (kernel id, position)

// Expands a (possibly combined) id placed at `pos` back into kernel taps.
void expand(Id id, std::int64_t pos, std::size_t L, const std::vector<Combination>& combos,
            std::multiset<Term>& out) {
  if (id <= L) {
    out.insert({id, pos});
    return;
  }
  const Combination& c = combos.at(id - L - 1);
  expand(c.in1, pos - c.gap, L, combos, out);
  expand(c.in2, pos, L, combos, out);
}

DenseTensor<Id> random_ymap(oracle::Gen& g, std::size_t max_rank, std::size_t max_dim,
                            std::size_t& L) {
  const auto dims = g.dims(max_rank, max_dim);
  const auto data = g.palette_ints(oracle::volume(dims), g.uniform(1, 6), 0.3);
  const auto f = factorize(DenseTensor<I>(Shape(std::vector<std::size_t>(dims)), data));
  L = f.kernel_size();
  return f.ymap;
}

}  // namespace

TEST(PatternSet, TwoEqualFibers) {
  const DenseTensor<Id> y(Shape{2, 2}, std::vector<Id>{1, 1, 1, 1});
  const auto p = build_pattern_set(y, 1);
  ASSERT_EQ(p.combinations.size(), 1u);
  EXPECT_EQ(p.combinations[0], (Combination{2, 1, 1, 1}));
  EXPECT_EQ(p.reduced.values(), (std::vector<Id>{0, 2, 0, 2}));
}

TEST(PatternSet, SingleFiberOfFourTaps) {
  const DenseTensor<Id> y(Shape{4}, std::vector<Id>{1, 2, 3, 1});
  const auto p = build_pattern_set(y, 3);
  // One combination per removed nonzero; ties go to the smallest triple.
  ASSERT_EQ(p.combinations.size(), 3u);
  EXPECT_EQ(p.combinations[0], (Combination{4, 1, 1, 3}));
  EXPECT_EQ(p.combinations[1], (Combination{5, 2, 3, 1}));
  EXPECT_EQ(p.combinations[2], (Combination{6, 5, 4, 1}));
  EXPECT_EQ(p.reduced.values(), (std::vector<Id>{0, 0, 0, 6}));
}

TEST(PatternSet, MostFrequentPairWins) {
  // (2, 1, gap 1) occurs in both fibers, everything else once.
  const DenseTensor<Id> y(Shape{2, 3}, std::vector<Id>{2, 1, 0, 3, 2, 1});
  const auto p = build_pattern_set(y, 3);
  ASSERT_FALSE(p.combinations.empty());
  EXPECT_EQ(p.combinations[0], (Combination{4, 2, 1, 1}));
}

TEST(PatternSet, NonOverlappingCount) {
  // [1,1,1]: only one (1,1,1) match fits; the leftover pair needs a second id.
  const DenseTensor<Id> y(Shape{3}, std::vector<Id>{1, 1, 1});
  const auto p = build_pattern_set(y, 1);
  EXPECT_EQ(p.combinations[0], (Combination{2, 1, 1, 1}));
  EXPECT_EQ(p.reduced.values(), (std::vector<Id>{0, 0, 3}));
}

TEST(PatternSet, ZeroAndSingletonFibers) {
  const DenseTensor<Id> zero(Shape{2, 3}, Id{0});
  const auto p = build_pattern_set(zero, 0);
  EXPECT_TRUE(p.combinations.empty());
  EXPECT_EQ(p.reduced, zero);
  const DenseTensor<Id> single(Shape{2, 3}, std::vector<Id>{0, 1, 0, 2, 0, 0});
  EXPECT_TRUE(build_pattern_set(single, 2).combinations.empty());
  EXPECT_EQ(code_of([&] { (void)build_pattern_set(single, 1); }), ErrorCode::kCorruptFactorization);
}

TEST(PatternSet, RandomCollapseAndExpansion) {
  oracle::Gen g(31);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t L = 0;
    const auto y = random_ymap(g, 3, 6, L);
    const auto p = build_pattern_set(y, L);
    std::uint64_t unshared = 0;
    std::map<Id, std::uint64_t> uses;
    for (std::size_t f = 0; f < y.fiber_count(); ++f) {
      const auto before = y.fiber(f);
      const auto after = p.reduced.fiber(f);
      std::multiset<Term> want, got;
      std::size_t nz = 0;
      for (std::size_t n = 0; n < before.size(); ++n)
        if (before[n]) want.insert({before[n], static_cast<std::int64_t>(n)}), ++nz;
      if (nz) unshared += nz - 1;
      std::size_t left = 0;
      for (std::size_t n = 0; n < after.size(); ++n)
        if (after[n]) {
          ++left;
          expand(after[n], static_cast<std::int64_t>(n), L, p.combinations, got);
        }
      ASSERT_LE(left, 1u);
      EXPECT_EQ(want, got);
    }
    for (std::size_t i = 0; i < p.combinations.size(); ++i) {
      const auto& c = p.combinations[i];
      EXPECT_EQ(c.id, L + 1 + i);
      EXPECT_LT(c.in1, c.id);
      EXPECT_LT(c.in2, c.id);
      EXPECT_GE(c.in1, 1u);
      EXPECT_GE(c.gap, 1u);
    }
    EXPECT_LE(p.combinations.size(), unshared);
  }
}

TEST(AdjustDelays, ZeroAdderDelayKeepsGaps) {
  const std::vector<Combination> c{{4, 1, 1, 3}, {5, 2, 3, 1}, {6, 5, 4, 1}};
  const auto plan = adjust_delays(c, 3, 0);
  EXPECT_EQ(plan.delta, 0);
  EXPECT_EQ(plan.q[0], (CombinationRow{4, 1, 1, 3, 0}));
  EXPECT_EQ(plan.q[1], (CombinationRow{5, 2, 3, 1, 0}));
  EXPECT_EQ(plan.q[2], (CombinationRow{6, 5, 4, 1, 0}));
}

TEST(AdjustDelays, SingleCombinationWithLatency) {
  const auto plan = adjust_delays({{3, 1, 2, 2}}, 2, 3);
  EXPECT_EQ(plan.delta, 3);
  EXPECT_EQ(plan.q[0], (CombinationRow{3, 1, 2, 5, 3}));
}

TEST(AdjustDelays, TwoLevelChain) {
  // c4 = 1(t-1) + 2(t); c5 = 3(t-1) + c4(t), adders one clock each. The
  // late operand arrives undelayed, so lateness compounds.
  const auto plan = adjust_delays({{4, 1, 2, 1}, {5, 3, 4, 1}}, 3, 1);
  EXPECT_EQ(plan.q[0], (CombinationRow{4, 1, 2, 2, 1}));
  EXPECT_EQ(plan.lateness[4], 1);
  EXPECT_EQ(plan.lateness[5], 2);
  EXPECT_EQ(plan.delta, 2);
  EXPECT_EQ(plan.q[1], (CombinationRow{5, 3, 4, 3, 1}));

  // A delayed late operand absorbs the latency instead: c5 = c4(t-2) + 3(t).
  const auto gap = adjust_delays({{4, 1, 2, 1}, {5, 4, 3, 2}}, 3, 1);
  EXPECT_EQ(gap.lateness[5], 1);
  EXPECT_EQ(gap.q[1], (CombinationRow{5, 4, 3, 2, 1}));
}

TEST(AdjustDelays, RetimingInvariants) {
  oracle::Gen g(37);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t L = 0;
    const auto y = random_ymap(g, 3, 6, L);
    const auto p = build_pattern_set(y, L);
    const std::int64_t delta = static_cast<std::int64_t>(g.uniform(0, 3));
    const auto plan = adjust_delays(p.combinations, L, delta);
    std::int64_t most = 0;
    for (std::size_t i = 0; i < plan.q.size(); ++i) {
      const auto& row = plan.q[i];
      const auto& c = p.combinations[i];
      EXPECT_GE(row.d1, delta);
      EXPECT_GE(row.d2, delta);
      // Both operands line up with the ideal signal a(t - gap) + b(t).
      EXPECT_EQ(plan.lateness[c.in1] + row.d1 - static_cast<std::int64_t>(c.gap), plan.lateness[c.id]);
      EXPECT_EQ(plan.lateness[c.in2] + row.d2, plan.lateness[c.id]);
      most = std::max(most, plan.lateness[c.id]);
    }
    EXPECT_EQ(plan.delta, most);
  }
}

TEST(AdjustChannels, ScalesLags) {
  const std::vector<CombinationRow> q{{3, 1, 2, 3, 1}};
  EXPECT_EQ(adjust_channels(q, 1), q);
  EXPECT_EQ(adjust_channels(q, 2)[0], (CombinationRow{3, 1, 2, 6, 2}));
  EXPECT_EQ(code_of([&] { (void)adjust_channels(q, 0); }), ErrorCode::kInvalidArgument);
}

TEST(ComputeDelaysIndices, ReadOff) {
  const DenseTensor<Id> y(Shape{2, 4}, std::vector<Id>{0, 0, 7, 0, 0, 0, 0, 0});
  const auto r = compute_delays_indices(y);
  EXPECT_EQ(r.position.values(), (std::vector<std::int64_t>{3, 0}));
  EXPECT_EQ(r.r_index.values(), (std::vector<Id>{7, 0}));
  const DenseTensor<Id> bad(Shape{3}, std::vector<Id>{1, 0, 2});
  EXPECT_EQ(code_of([&] { (void)compute_delays_indices(bad); }), ErrorCode::kInvalidArgument);
}

TEST(Synthesize, ZeroTensor) {
  const auto s = synthesize(DenseTensor<I>(Shape{3, 4}), {});
  EXPECT_TRUE(s.q.empty());
  EXPECT_TRUE(s.kernel.empty());
  for (Id r : s.r_index.data()) EXPECT_EQ(r, 0u);
  EXPECT_EQ(s.r_index.shape(), Shape{3});
  EXPECT_NO_THROW(validate(s));
}

TEST(Synthesize, ChannelsMultiplyAllLags) {
  const DenseTensor<I> t(Shape{4, 3}, std::vector<I>{0, 2, 3, 3, 2, 0, 2, 3, 0, 2, 0, 3});
  const auto one = synthesize(t, {1.0, 2, 1});
  const auto two = synthesize(t, {1.0, 2, 2});
  ASSERT_EQ(one.q.size(), two.q.size());
  for (std::size_t i = 0; i < one.q.size(); ++i) {
    EXPECT_EQ(two.q[i].d1, 2 * one.q[i].d1);
    EXPECT_EQ(two.q[i].d2, 2 * one.q[i].d2);
    EXPECT_EQ(two.q[i].d1 % 2, 0);
  }
  for (std::size_t i = 0; i < one.d_delay.size(); ++i)
    EXPECT_EQ(two.d_delay[i], 2 * one.d_delay[i]);
  EXPECT_EQ(two.buffer_columns(), 2 * one.buffer_columns());
}

TEST(Synthesize, RoundsBeforeFactorizing) {
  const auto t = DenseTensor<double>::vector({1.02, 0.98, 2.01, 0.0});
  const auto s = synthesize(t, {0.1, 0, 1});
  EXPECT_EQ(s.kernel, (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(code_of([&] { (void)synthesize(t, {0.0, 0, 1}); }), ErrorCode::kInvalidPrecision);
  EXPECT_EQ(code_of([&] { (void)synthesize(t, {1.0, -1, 1}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { (void)synthesize(t, {1.0, 0, 0}); }), ErrorCode::kInvalidArgument);
}

TEST(Validate, RejectsMalformedSchemes) {
  const DenseTensor<I> t(Shape{4}, std::vector<I>{2, 3, 4, 2});
  const auto good = synthesize(t, {});
  ASSERT_NO_THROW(validate(good));

  auto s = good;
  s.kernel[0] = 0;
  EXPECT_EQ(code_of([&] { validate(s); }), ErrorCode::kMalformedScheme);
  s = good;
  s.q[0].in1 = s.q[0].id;
  EXPECT_EQ(code_of([&] { validate(s); }), ErrorCode::kMalformedScheme);
  s = good;
  s.q[0].id += 1;
  EXPECT_EQ(code_of([&] { validate(s); }), ErrorCode::kMalformedScheme);
  s = good;
  s.q[0].d1 = s.buffer_columns();
  EXPECT_EQ(code_of([&] { validate(s); }), ErrorCode::kMalformedScheme);
  s = good;
  s.r_index[0] = static_cast<Id>(s.lane_count() + 1);
  EXPECT_EQ(code_of([&] { validate(s); }), ErrorCode::kMalformedScheme);
  s = good;
  s.d_delay[0] = -1;
  EXPECT_EQ(code_of([&] { validate(s); }), ErrorCode::kMalformedScheme);
  s = good;
  s.sigma = 0;
  EXPECT_EQ(code_of([&] { validate(s); }), ErrorCode::kMalformedScheme);
}
