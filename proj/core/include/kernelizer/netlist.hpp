#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kernelizer/error.hpp"
#include "kernelizer/scheme.hpp"

// Block-diagram view of a scheme as a synchronous circuit.
//
// Naming: "N0" is the input node. Multiplier "M<l>" drives node "N<l>_0",
// adder "A<id>" drives "N<id>_0", and unit delay "Z<s>_<j>" takes
// "N<s>_<j-1>" to "N<s>_<j>", so "N<s>_<j>" is lane s delayed by j clocks.
// Output cell (i1, i2, ...) is node "R<i1>_<i2>..." (1-based), wired to the
// delayed lane it reads.

namespace kernelizer {

enum class ComponentKind { kMultiplier, kAdder, kDelay };

std::string_view to_string(ComponentKind kind) noexcept;
ComponentKind component_kind_from(std::string_view name);

template <Scalar T>
struct Component {
  std::string name;
  ComponentKind kind = ComponentKind::kDelay;
  T gain{};                  // multipliers only
  std::int64_t latency = 0;  // clocks: adders sigma * delta, delays 1

  friend bool operator==(const Component&, const Component&) = default;
};

/// Port 0 is a component output; ports 1 and 2 are inputs. Node-to-node
/// edges (output wiring) use port 0.
struct Edge {
  std::string from;
  std::string to;
  int port = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

template <Scalar T>
struct Netlist {
  std::vector<std::string> nodes;
  std::vector<Component<T>> components;
  std::vector<Edge> edges;
  /// Output node per result cell, row-major over output_shape.
  std::vector<std::string> outputs;
  Shape output_shape;
  /// Readout lags were shortened by this many clocks so the earliest output
  /// needs no delay; the circuit output at clock t equals the engine output
  /// at clock t + output_advance.
  std::int64_t output_advance = 0;

  std::size_t count(ComponentKind kind) const {
    std::size_t n = 0;
    for (const auto& c : components) n += c.kind == kind;
    return n;
  }

  friend bool operator==(const Netlist&, const Netlist&) = default;
};

namespace detail {

template <Scalar T>
std::string format_scalar(const T& x) {
  if constexpr (std::integral<T>) {
    return std::to_string(x);
  } else if constexpr (std::floating_point<T>) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
  } else {
    std::string s = format_scalar(x.real());
    const auto im = x.imag();
    if (!std::signbit(im)) s += '+';
    return s + format_scalar(im) + "i";
  }
}

class NetlistBuilder {
 public:
  std::vector<std::string> nodes;
  std::vector<Edge> edges;

  void add_node(const std::string& name) {
    require(existing_.insert(name).second, ErrorCode::kInternal, "duplicate node " + name);
    nodes.push_back(name);
  }
  bool has(const std::string& name) const { return existing_.contains(name); }

  static std::string lane_node(Id src, std::int64_t depth) {
    return "N" + std::to_string(src) + "_" + std::to_string(depth);
  }

  /// Extends the delay chain of `src` down to `depth`, reusing what exists.
  std::string chain(Id src, std::int64_t depth, std::vector<std::string>& components) {
    require(has(lane_node(src, 0)), ErrorCode::kMalformedScheme,
            "operand " + std::to_string(src) + " has no producing node");
    for (std::int64_t j = 1; j <= depth; ++j) {
      const std::string node = lane_node(src, j);
      if (has(node)) continue;
      const std::string z = "Z" + std::to_string(src) + "_" + std::to_string(j);
      components.push_back(z);
      add_node(node);
      edges.push_back({lane_node(src, j - 1), z, 1});
      edges.push_back({z, node, 0});
    }
    return lane_node(src, depth);
  }

 private:
  std::set<std::string> existing_;
};

}  // namespace detail

template <Scalar T>
Netlist<T> build_netlist(const Scheme<T>& scheme) {
  validate(scheme);
  const std::int64_t adder_latency = scheme.sigma * scheme.adder_delay;
  Netlist<T> net;
  detail::NetlistBuilder b;
  std::vector<std::string> order;  // component names in creation order
  std::map<std::string, Component<T>> made;

  const auto add_delays = [&](std::size_t from) {
    for (std::size_t i = from; i < order.size(); ++i)
      if (!made.contains(order[i])) made[order[i]] = {order[i], ComponentKind::kDelay, T{}, 1};
  };

  b.add_node("N0");
  for (std::size_t l = 0; l < scheme.kernel.size(); ++l) {
    const std::string m = "M" + std::to_string(l + 1);
    order.push_back(m);
    made[m] = {m, ComponentKind::kMultiplier, scheme.kernel[l], 0};
    const std::string out = detail::NetlistBuilder::lane_node(static_cast<Id>(l + 1), 0);
    b.add_node(out);
    b.edges.push_back({"N0", m, 1});
    b.edges.push_back({m, out, 0});
  }
  for (const CombinationRow& row : scheme.q) {
    require(row.d1 >= adder_latency && row.d2 >= adder_latency, ErrorCode::kMalformedScheme,
            "combination " + std::to_string(row.id) + " reads an operand sooner than the adder latency");
    const std::size_t before = order.size();
    const std::string in1 = b.chain(row.in1, row.d1 - adder_latency, order);
    const std::string in2 = b.chain(row.in2, row.d2 - adder_latency, order);
    add_delays(before);
    const std::string a = "A" + std::to_string(row.id);
    order.push_back(a);
    made[a] = {a, ComponentKind::kAdder, T{}, adder_latency};
    const std::string out = detail::NetlistBuilder::lane_node(row.id, 0);
    b.add_node(out);
    b.edges.push_back({in1, a, 1});
    b.edges.push_back({in2, a, 2});
    b.edges.push_back({a, out, 0});
  }

  std::int64_t least = 0;
  bool any = false;
  for (std::size_t i = 0; i < scheme.r_index.size(); ++i) {
    if (scheme.r_index[i] == 0) continue;
    least = any ? std::min(least, scheme.d_delay[i]) : scheme.d_delay[i];
    any = true;
  }
  net.output_shape = scheme.r_index.shape();
  net.output_advance = least;
  for (std::size_t i = 0; i < scheme.r_index.size(); ++i) {
    std::string name = "R";
    const auto index = net.output_shape.unravel(i);
    for (std::size_t k = 0; k < index.size(); ++k)
      name += (k ? "_" : "") + std::to_string(index[k] + 1);
    b.add_node(name);
    net.outputs.push_back(name);
    const Id r = scheme.r_index[i];
    if (r == 0) continue;  // undriven output reads as constant zero
    const std::size_t before = order.size();
    const std::string src = b.chain(r, scheme.d_delay[i] - least, order);
    add_delays(before);
    b.edges.push_back({src, name, 0});
  }

  net.nodes = std::move(b.nodes);
  net.edges = std::move(b.edges);
  for (const auto& name : order) net.components.push_back(made.at(name));
  return net;
}

/// Graphviz text with a fixed statement order.
template <Scalar T>
std::string emit_dot(const Netlist<T>& net) {
  if (net.nodes.empty() && net.components.empty() && net.edges.empty())
    return "digraph scheme { }\n";
  std::set<std::string> outputs(net.outputs.begin(), net.outputs.end());
  std::ostringstream os;
  os << "digraph scheme {\n  rankdir=LR;\n";
  for (const auto& n : net.nodes) {
    if (n == "N0")
      os << "  \"" << n << "\" [shape=invhouse, label=\"in\"];\n";
    else if (outputs.contains(n))
      os << "  \"" << n << "\" [shape=house, label=\"" << n << "\"];\n";
    else
      os << "  \"" << n << "\" [shape=point, xlabel=\"" << n << "\"];\n";
  }
  for (const auto& c : net.components) {
    switch (c.kind) {
      case ComponentKind::kMultiplier:
        os << "  \"" << c.name << "\" [shape=triangle, orientation=270, label=\"x "
           << detail::format_scalar(c.gain) << "\"];\n";
        break;
      case ComponentKind::kAdder:
        os << "  \"" << c.name << "\" [shape=circle, label=\"+ " << c.name.substr(1);
        if (c.latency > 0) os << "\\nlat " << c.latency;
        os << "\"];\n";
        break;
      case ComponentKind::kDelay:
        os << "  \"" << c.name << "\" [shape=box, width=0.3, height=0.3, label=\"z-1\"];\n";
        break;
    }
  }
  for (const auto& e : net.edges) {
    os << "  \"" << e.from << "\" -> \"" << e.to << "\"";
    if (e.port > 0) os << " [headlabel=\"" << e.port << "\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

/// Clocks a netlist: multipliers are combinational, unit delays are
/// registers and adders are pipelines of `latency` registers.
template <Scalar T>
class NetlistSimulator {
 public:
  /// With `align`, outputs are additionally held back by output_advance
  /// clocks so they line up with the streaming engine sample for sample.
  explicit NetlistSimulator(const Netlist<T>& net, bool align = true) : net_(net) {
    const std::size_t nn = net.nodes.size();
    for (std::size_t i = 0; i < nn; ++i)
      require(node_index_.emplace(net.nodes[i], i).second, ErrorCode::kMalformedScheme,
              "duplicate node " + net.nodes[i]);
    for (std::size_t i = 0; i < net.components.size(); ++i)
      require(comp_index_.emplace(net.components[i].name, i).second && !node_index_.contains(net.components[i].name),
              ErrorCode::kMalformedScheme, "duplicate name " + net.components[i].name);

    node_driver_.assign(nn, kNone);
    inputs_.assign(net.components.size(), {kNone, kNone});
    std::vector<std::vector<std::size_t>> succ(nn + net.components.size());
    std::vector<std::size_t> indeg(succ.size(), 0);
    const auto link = [&](std::size_t from, std::size_t to) {
      succ[from].push_back(to);
      ++indeg[to];
    };
    for (const Edge& e : net.edges) {
      const bool from_node = node_index_.contains(e.from);
      const bool to_node = node_index_.contains(e.to);
      if (from_node && to_node) {
        const std::size_t f = node_index_.at(e.from), t = node_index_.at(e.to);
        set_driver(t, f);
        link(f, t);
      } else if (from_node) {
        const std::size_t c = component(e.to);
        const std::size_t f = node_index_.at(e.from);
        require(e.port >= 1 && e.port <= arity(c), ErrorCode::kMalformedScheme,
                "bad input port on " + e.to);
        require(inputs_[c][e.port - 1] == kNone, ErrorCode::kMalformedScheme,
                "input port driven twice on " + e.to);
        inputs_[c][e.port - 1] = f;
        if (combinational(c)) link(f, nn + c);
      } else {
        const std::size_t c = component(e.from);
        require(to_node, ErrorCode::kMalformedScheme, "component drives a non-node " + e.to);
        require(e.port == 0, ErrorCode::kMalformedScheme, "component output edge needs port 0");
        const std::size_t t = node_index_.at(e.to);
        set_driver(t, nn + c);
        link(nn + c, t);
      }
    }
    for (std::size_t c = 0; c < net.components.size(); ++c)
      for (int p = 0; p < arity(c); ++p)
        require(inputs_[c][p] != kNone, ErrorCode::kMalformedScheme,
                "unconnected input on " + net.components[c].name);

    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < succ.size(); ++i)
      if (indeg[i] == 0) ready.push_back(i);
    while (!ready.empty()) {
      const std::size_t i = ready.back();
      ready.pop_back();
      order_.push_back(i);
      for (std::size_t j : succ[i])
        if (--indeg[j] == 0) ready.push_back(j);
    }
    require(order_.size() == succ.size(), ErrorCode::kMalformedScheme,
            "netlist has a combinational cycle");

    for (const auto& o : net.outputs) {
      require(node_index_.contains(o), ErrorCode::kMalformedScheme, "unknown output node " + o);
      outputs_.push_back(node_index_.at(o));
    }
    input_ = node_index_.contains("N0") ? node_index_.at("N0") : kNone;
    hold_ = align ? net.output_advance : 0;
    reset();
  }

  void reset() {
    node_value_.assign(net_.nodes.size(), T{});
    comp_value_.assign(net_.components.size(), T{});
    pipes_.assign(net_.components.size(), {});
    for (std::size_t c = 0; c < net_.components.size(); ++c) {
      const auto& comp = net_.components[c];
      const std::int64_t depth = comp.kind == ComponentKind::kDelay ? 1
                                 : comp.kind == ComponentKind::kAdder ? comp.latency
                                                                      : 0;
      pipes_[c].assign(static_cast<std::size_t>(std::max<std::int64_t>(depth, 0)), T{});
    }
    history_.assign(static_cast<std::size_t>(hold_), DenseTensor<T>(net_.output_shape));
  }

  DenseTensor<T> step(const T& sample) {
    const std::size_t nn = net_.nodes.size();
    for (std::size_t item : order_) {
      if (item < nn) {
        const std::size_t d = node_driver_[item];
        if (item == input_) node_value_[item] = sample;
        else if (d == kNone) node_value_[item] = T{};
        else if (d < nn) node_value_[item] = node_value_[d];
        else node_value_[item] = comp_value_[d - nn];
      } else {
        const std::size_t c = item - nn;
        comp_value_[c] = pipes_[c].empty() ? evaluate(c) : pipes_[c].front();
      }
    }
    for (std::size_t c = 0; c < pipes_.size(); ++c) {
      if (pipes_[c].empty()) continue;
      pipes_[c].pop_front();
      pipes_[c].push_back(evaluate(c));
    }
    DenseTensor<T> out(net_.output_shape);
    for (std::size_t i = 0; i < outputs_.size() && i < out.size(); ++i)
      out[i] = node_value_[outputs_[i]];
    if (hold_ == 0) return out;
    history_.push_back(std::move(out));
    DenseTensor<T> aligned = std::move(history_.front());
    history_.pop_front();
    return aligned;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t component(const std::string& name) const {
    auto it = comp_index_.find(name);
    require(it != comp_index_.end(), ErrorCode::kMalformedScheme, "unknown endpoint " + name);
    return it->second;
  }
  int arity(std::size_t c) const {
    return net_.components[c].kind == ComponentKind::kAdder ? 2 : 1;
  }
  bool combinational(std::size_t c) const {
    const auto& comp = net_.components[c];
    return comp.kind == ComponentKind::kMultiplier ||
           (comp.kind == ComponentKind::kAdder && comp.latency == 0);
  }
  void set_driver(std::size_t node, std::size_t driver) {
    require(node_driver_[node] == kNone, ErrorCode::kMalformedScheme,
            "node " + net_.nodes[node] + " has two drivers");
    node_driver_[node] = driver;
  }
  T evaluate(std::size_t c) const {
    const auto& comp = net_.components[c];
    switch (comp.kind) {
      case ComponentKind::kMultiplier: return comp.gain * node_value_[inputs_[c][0]];
      case ComponentKind::kAdder:
        return node_value_[inputs_[c][0]] + node_value_[inputs_[c][1]];
      case ComponentKind::kDelay: return node_value_[inputs_[c][0]];
    }
    return T{};
  }

  Netlist<T> net_;
  std::map<std::string, std::size_t> node_index_;
  std::map<std::string, std::size_t> comp_index_;
  std::vector<std::size_t> node_driver_;
  std::vector<std::array<std::size_t, 2>> inputs_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> outputs_;
  std::size_t input_ = kNone;
  std::int64_t hold_ = 0;

  std::vector<T> node_value_;
  std::vector<T> comp_value_;
  std::vector<std::deque<T>> pipes_;
  std::deque<DenseTensor<T>> history_;
};

}  // namespace kernelizer
