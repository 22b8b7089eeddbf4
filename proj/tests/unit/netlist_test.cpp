#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "dot_grammar.hpp"
#include "kernelizer/netlist.hpp"
#include "kernelizer/streaming_engine.hpp"
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

Scheme<I> random_scheme(oracle::Gen& g) {
  const auto dims = g.dims(3, 5);
  const auto data = g.palette_ints(oracle::volume(dims), g.uniform(1, 6), 0.3);
  const DenseTensor<I> t(Shape(std::vector<std::size_t>(dims)), data);
  return synthesize(t, {1.0, static_cast<std::int64_t>(g.uniform(0, 2)),
                        static_cast<std::int64_t>(g.uniform(1, 3))});
}

// Longest delay chain each lane needs, computed from the scheme alone.
std::size_t expected_delays(const Scheme<I>& s) {
  std::map<Id, std::int64_t> depth;
  const std::int64_t lat = s.sigma * s.adder_delay;
  for (const auto& row : s.q) {
    depth[row.in1] = std::max(depth[row.in1], row.d1 - lat);
    depth[row.in2] = std::max(depth[row.in2], row.d2 - lat);
  }
  std::int64_t least = -1;
  for (std::size_t i = 0; i < s.r_index.size(); ++i)
    if (s.r_index[i] && (least < 0 || s.d_delay[i] < least)) least = s.d_delay[i];
  for (std::size_t i = 0; i < s.r_index.size(); ++i)
    if (s.r_index[i]) depth[s.r_index[i]] = std::max(depth[s.r_index[i]], s.d_delay[i] - least);
  std::size_t total = 0;
  for (const auto& [id, d] : depth) total += static_cast<std::size_t>(d);
  return total;
}

}  // namespace

TEST(BuildNetlist, SingleTap) {
  const auto s = synthesize(DenseTensor<I>::vector({5}), {});
  const auto net = build_netlist(s);
  EXPECT_EQ(net.count(ComponentKind::kMultiplier), 1u);
  EXPECT_EQ(net.count(ComponentKind::kAdder), 0u);
  EXPECT_EQ(net.count(ComponentKind::kDelay), 0u);
  EXPECT_EQ(net.nodes, (std::vector<std::string>{"N0", "N1_0", "R1"}));
  EXPECT_EQ(net.edges, (std::vector<Edge>{{"N0", "M1", 1}, {"M1", "N1_0", 0}, {"N1_0", "R1", 0}}));
  NetlistSimulator<I> sim(net);
  EXPECT_EQ(sim.step(3)[0], 15);
}

TEST(BuildNetlist, DotProductCircuit) {
  const auto s = synthesize(DenseTensor<I>::vector({2, 3, 4, 2}), {});
  const auto net = build_netlist(s);
  EXPECT_EQ(net.count(ComponentKind::kMultiplier), 3u);
  EXPECT_EQ(net.count(ComponentKind::kAdder), s.q.size());
  EXPECT_EQ(net.count(ComponentKind::kDelay), expected_delays(s));
  NetlistSimulator<I> sim(net);
  std::vector<I> out;
  for (I x : {5, 6, 7, 8}) out.push_back(sim.step(x)[0]);
  EXPECT_EQ(out, (std::vector<I>{10, 32, 53, 72}));
}

TEST(BuildNetlist, MatvecCircuitWithLatency) {
  const DenseTensor<I> t(Shape{4, 3}, std::vector<I>{0, 2, 3, 3, 2, 0, 2, 3, 0, 2, 0, 3});
  const auto s = synthesize(t, {1.0, 1, 1});
  const auto net = build_netlist(s);
  NetlistSimulator<I> sim(net);
  StreamingEngine<I> engine(s);
  for (I x : {2, 3, 4, 0, 0, 0, 0}) EXPECT_EQ(sim.step(x), engine.push(x));
  for (const auto& c : net.components)
    if (c.kind == ComponentKind::kAdder) {
      EXPECT_EQ(c.latency, 1);
    }
}

TEST(BuildNetlist, UndrivenOutputsReadZero) {
  const DenseTensor<I> t(Shape{2, 2}, std::vector<I>{0, 0, 1, 2});
  const auto net = build_netlist(synthesize(t, {}));
  NetlistSimulator<I> sim(net);
  const auto out = sim.step(4);
  EXPECT_EQ(out.values(), (std::vector<I>{0, 8}));
  EXPECT_EQ(net.outputs, (std::vector<std::string>{"R1", "R2"}));
}

TEST(BuildNetlist, RandomSchemesMatchEngine) {
  oracle::Gen g(61);
  for (int trial = 0; trial < 80; ++trial) {
    const auto s = random_scheme(g);
    const auto net = build_netlist(s);
    EXPECT_EQ(net.count(ComponentKind::kAdder), s.q.size());
    EXPECT_EQ(net.count(ComponentKind::kMultiplier), s.kernel.size());
    EXPECT_EQ(net.count(ComponentKind::kDelay), expected_delays(s));

    const auto stream = g.ints(g.uniform(1, 40), -9, 9);
    NetlistSimulator<I> aligned(net), raw(net, false);
    StreamingEngine<I> engine(s);
    std::vector<DenseTensor<I>> want, fast;
    for (I x : stream) {
      const auto e = engine.push(x);
      ASSERT_EQ(aligned.step(x), e) << "trial " << trial;
      want.push_back(e);
      fast.push_back(raw.step(x));
    }
    // Unaligned, the circuit runs output_advance samples ahead of the engine.
    const auto adv = static_cast<std::size_t>(net.output_advance);
    for (std::size_t k = 0; k + adv < stream.size(); ++k) EXPECT_EQ(fast[k], want[k + adv]);
  }
}

TEST(BuildNetlist, RejectsDanglingOperand) {
  auto s = synthesize(DenseTensor<I>::vector({2, 3, 4, 2}), {});
  s.q[0].in1 = 99;
  EXPECT_EQ(code_of([&] { (void)build_netlist(s); }), ErrorCode::kMalformedScheme);
}

TEST(EmitDot, EmptyNetlist) {
  EXPECT_EQ(emit_dot(Netlist<I>{}), "digraph scheme { }\n");
  EXPECT_TRUE(dot::check(emit_dot(Netlist<I>{})).ok);
}

TEST(EmitDot, ParsesAndListsEverything) {
  oracle::Gen g(67);
  for (int trial = 0; trial < 40; ++trial) {
    const auto net = build_netlist(random_scheme(g));
    const auto text = emit_dot(net);
    const auto summary = dot::check(text);
    ASSERT_TRUE(summary.ok) << summary.error << "\n" << text;
    EXPECT_TRUE(summary.directed);
    EXPECT_EQ(summary.node_statements, net.nodes.size() + net.components.size());
    EXPECT_EQ(summary.edges, net.edges.size());
    for (const auto& n : net.nodes) EXPECT_TRUE(summary.ids.contains(n)) << n;
    EXPECT_EQ(emit_dot(net), text);
  }
}

TEST(EmitDot, ComplexGainsAreQuoted) {
  using C = std::complex<double>;
  const auto s = synthesize(DenseTensor<C>::vector({C(1, -0.5), C(2, 0)}), {0.5, 0, 1});
  const auto text = emit_dot(build_netlist(s));
  EXPECT_NE(text.find("x 1-0.5i"), std::string::npos);
  EXPECT_TRUE(dot::check(text).ok);
}

TEST(DotGrammar, RejectsBrokenText) {
  EXPECT_FALSE(dot::check("digraph { a -> }").ok);
  EXPECT_FALSE(dot::check("digraph { a -- b }").ok);
  EXPECT_FALSE(dot::check("digraph { \"a }").ok);
  EXPECT_TRUE(dot::check("strict graph g { a -- b -- c [color=red]; subgraph s { d } }").ok);
}

TEST(Simulator, RejectsMalformedNetlists) {
  Netlist<I> twice;
  twice.nodes = {"N0", "X"};
  twice.components = {{"M1", ComponentKind::kMultiplier, 2, 0}, {"M2", ComponentKind::kMultiplier, 3, 0}};
  twice.edges = {{"N0", "M1", 1}, {"N0", "M2", 1}, {"M1", "X", 0}, {"M2", "X", 0}};
  EXPECT_EQ(code_of([&] { NetlistSimulator<I> s(twice); }), ErrorCode::kMalformedScheme);

  Netlist<I> loop;
  loop.nodes = {"N0", "X"};
  loop.components = {{"A1", ComponentKind::kAdder, 0, 0}};
  loop.edges = {{"N0", "A1", 1}, {"X", "A1", 2}, {"A1", "X", 0}};
  EXPECT_EQ(code_of([&] { NetlistSimulator<I> s(loop); }), ErrorCode::kMalformedScheme);

  // The same loop through a register is a legal accumulator.
  loop.components = {{"A1", ComponentKind::kAdder, 0, 1}};
  NetlistSimulator<I> acc(loop, false);
  EXPECT_NO_THROW(acc.step(1));

  Netlist<I> unknown;
  unknown.nodes = {"N0"};
  unknown.edges = {{"N0", "Q", 1}};
  EXPECT_EQ(code_of([&] { NetlistSimulator<I> s(unknown); }), ErrorCode::kMalformedScheme);
}
