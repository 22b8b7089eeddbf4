#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kernelizer/error.hpp"
#include "kernelizer/factorization.hpp"
#include "kernelizer/matched_filter.hpp"
#include "kernelizer/netlist.hpp"
#include "kernelizer/op_count.hpp"
#include "kernelizer/scheme.hpp"
#include "kernelizer/tensor.hpp"

// JSON forms. Tensors are {"shape": [...], "data": [...]} with row-major
// data; complex scalars are [re, im] pairs. Malformed input raises
// Error(kParse).

namespace kernelizer::json_io {

using nlohmann::json;
using nlohmann::ordered_json;

enum class ScalarKind { kInteger, kReal, kComplex };

/// Widest scalar kind appearing in a JSON value (numbers and [re, im] pairs).
ScalarKind detect_kind(const json& j);

[[noreturn]] void parse_error(const std::string& what);

template <Scalar T, typename J = json>
J scalar_to_json(const T& x) {
  if constexpr (is_complex_v<T>)
    return J::array({x.real() + 0.0, x.imag() + 0.0});
  else if constexpr (std::floating_point<T>)
    return J(x + T{0});
  else
    return J(x);
}

template <Scalar T>
T scalar_from_json(const json& j) {
  if constexpr (is_complex_v<T>) {
    using R = typename T::value_type;
    if (j.is_number()) return T(j.get<R>(), R{0});
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
      parse_error("expected a number or a [re, im] pair");
    return T(j[0].get<R>(), j[1].get<R>());
  } else if constexpr (std::floating_point<T>) {
    if (!j.is_number()) parse_error("expected a number");
    return j.get<T>();
  } else {
    if (!j.is_number_integer()) parse_error("expected an integer");
    if constexpr (std::is_unsigned_v<T>)
      if (!j.is_number_unsigned() && j.get<std::int64_t>() < 0)
        parse_error("expected a nonnegative integer");
    return j.get<T>();
  }
}

Shape shape_from_json(const json& j);
json shape_to_json(const Shape& s);

template <typename T, typename J = json>
J tensor_to_json(const DenseTensor<T>& t) {
  J data = J::array();
  for (const T& x : t.data()) {
    if constexpr (Scalar<T>)
      data.push_back(scalar_to_json<T, J>(x));
    else
      data.push_back(x);
  }
  J out = J::object();
  J shape = J::array();
  for (auto d : t.shape().dims()) shape.push_back(d);
  out["shape"] = std::move(shape);
  out["data"] = std::move(data);
  return out;
}

template <typename T>
DenseTensor<T> tensor_from_json(const json& j) {
  if (!j.is_object() || !j.contains("shape") || !j.contains("data"))
    parse_error("tensor must be an object with \"shape\" and \"data\"");
  Shape shape = shape_from_json(j.at("shape"));
  const json& data = j.at("data");
  if (!data.is_array()) parse_error("tensor \"data\" must be an array");
  if (data.size() != shape.size())
    parse_error("tensor data has " + std::to_string(data.size()) + " elements, shape " +
                shape.to_string() + " needs " + std::to_string(shape.size()));
  std::vector<T> values;
  values.reserve(data.size());
  for (const json& x : data) {
    if constexpr (Scalar<T>) {
      values.push_back(scalar_from_json<T>(x));
    } else {
      if (!x.is_number_integer()) parse_error("expected an integer");
      values.push_back(x.get<T>());
    }
  }
  return DenseTensor<T>(std::move(shape), std::move(values));
}

/// A vector given either as a rank-1 tensor object or as a bare array.
template <Scalar T>
std::vector<T> vector_from_json(const json& j) {
  if (j.is_object()) {
    auto t = tensor_from_json<T>(j);
    if (t.rank() != 1) parse_error("expected a rank-1 tensor");
    return t.values();
  }
  if (!j.is_array()) parse_error("expected a vector");
  std::vector<T> v;
  for (const json& x : j) v.push_back(scalar_from_json<T>(x));
  return v;
}

template <Scalar T>
json factorization_to_json(const Factorization<T>& f) {
  json kernel = json::array();
  for (const T& u : f.kernel) kernel.push_back(scalar_to_json(u));
  return {{"kernel", std::move(kernel)}, {"ymap", tensor_to_json(f.ymap)}};
}

template <Scalar T>
Factorization<T> factorization_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kernel") || !j.contains("ymap"))
    parse_error("factorization needs \"kernel\" and \"ymap\"");
  Factorization<T> f;
  if (!j.at("kernel").is_array()) parse_error("\"kernel\" must be an array");
  for (const json& u : j.at("kernel")) f.kernel.push_back(scalar_from_json<T>(u));
  f.ymap = tensor_from_json<Id>(j.at("ymap"));
  validate(f);
  return f;
}

template <Scalar T>
json scheme_to_json(const Scheme<T>& s) {
  json kernel = json::array();
  for (const T& u : s.kernel) kernel.push_back(scalar_to_json(u));
  json q = json::array();
  for (const auto& r : s.q) q.push_back({r.id, r.in1, r.in2, r.d1, r.d2});
  return {{"kernel", std::move(kernel)},         {"q", std::move(q)},
          {"r_index", tensor_to_json(s.r_index)}, {"d_delay", tensor_to_json(s.d_delay)},
          {"delta", s.delta},                     {"sigma", s.sigma},
          {"n_last", s.n_last},                   {"adder_delay", s.adder_delay}};
}

namespace detail {

std::int64_t integer_field(const json& j, const char* key, std::optional<std::int64_t> fallback);
std::vector<CombinationRow> rows_from_json(const json& q);

}  // namespace detail

/// Parses and validates a scheme; structural problems raise
/// Error(kMalformedScheme).
template <Scalar T>
Scheme<T> scheme_from_json(const json& j) {
  if (!j.is_object()) parse_error("scheme must be an object");
  for (const char* key : {"kernel", "q", "r_index", "d_delay", "delta", "sigma", "n_last"})
    if (!j.contains(key)) parse_error(std::string("scheme is missing \"") + key + "\"");
  Scheme<T> s;
  if (!j.at("kernel").is_array()) parse_error("\"kernel\" must be an array");
  for (const json& u : j.at("kernel")) s.kernel.push_back(scalar_from_json<T>(u));
  s.q = detail::rows_from_json(j.at("q"));
  s.r_index = tensor_from_json<Id>(j.at("r_index"));
  s.d_delay = tensor_from_json<std::int64_t>(j.at("d_delay"));
  s.delta = detail::integer_field(j, "delta", std::nullopt);
  s.sigma = detail::integer_field(j, "sigma", std::nullopt);
  const std::int64_t n_last = detail::integer_field(j, "n_last", std::nullopt);
  if (n_last < 1) fail(ErrorCode::kMalformedScheme, "n_last must be >= 1");
  s.n_last = static_cast<std::size_t>(n_last);
  s.adder_delay = detail::integer_field(j, "adder_delay", 0);
  validate(s);
  return s;
}

template <Scalar T>
ordered_json netlist_to_json(const Netlist<T>& n) {
  ordered_json out = ordered_json::object();
  out["nodes"] = n.nodes;
  ordered_json comps = ordered_json::array();
  for (const auto& c : n.components) {
    ordered_json e = ordered_json::object();
    e["name"] = c.name;
    e["kind"] = std::string(to_string(c.kind));
    if (c.kind == ComponentKind::kMultiplier) e["gain"] = scalar_to_json<T, ordered_json>(c.gain);
    e["latency"] = c.latency;
    comps.push_back(std::move(e));
  }
  out["components"] = std::move(comps);
  ordered_json edges = ordered_json::array();
  for (const auto& e : n.edges) {
    ordered_json x = ordered_json::object();
    x["from"] = e.from;
    x["to"] = e.to;
    x["port"] = e.port;
    edges.push_back(std::move(x));
  }
  out["edges"] = std::move(edges);
  if (!n.outputs.empty() || n.output_advance != 0 || !(n.output_shape == Shape{1})) {
    out["outputs"] = n.outputs;
    ordered_json shape = ordered_json::array();
    for (auto d : n.output_shape.dims()) shape.push_back(d);
    out["output_shape"] = std::move(shape);
    out["output_advance"] = n.output_advance;
  }
  return out;
}

template <Scalar T>
std::string emit_json(const Netlist<T>& n) {
  return netlist_to_json(n).dump();
}

template <Scalar T>
Netlist<T> netlist_from_json(const json& j) {
  if (!j.is_object()) parse_error("netlist must be an object");
  for (const char* key : {"nodes", "components", "edges"})
    if (!j.contains(key) || !j.at(key).is_array())
      parse_error(std::string("netlist needs an array \"") + key + "\"");
  Netlist<T> n;
  try {
    n.nodes = j.at("nodes").get<std::vector<std::string>>();
    for (const json& c : j.at("components")) {
      Component<T> comp;
      comp.name = c.at("name").get<std::string>();
      comp.kind = component_kind_from(c.at("kind").get<std::string>());
      if (c.contains("gain")) comp.gain = scalar_from_json<T>(c.at("gain"));
      comp.latency = c.value("latency", std::int64_t{0});
      n.components.push_back(std::move(comp));
    }
    for (const json& e : j.at("edges"))
      n.edges.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>(),
                         e.value("port", 0)});
    if (j.contains("outputs")) n.outputs = j.at("outputs").get<std::vector<std::string>>();
    if (j.contains("output_shape")) n.output_shape = shape_from_json(j.at("output_shape"));
    n.output_advance = j.value("output_advance", std::int64_t{0});
  } catch (const json::exception& e) {
    parse_error(std::string("malformed netlist: ") + e.what());
  }
  return n;
}

template <Scalar T>
Netlist<T> parse_netlist(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_error(e.what());
  }
  return netlist_from_json<T>(j);
}

json op_count_to_json(const OpCount& c);
json ratios_to_json(const OpRatios& r);
/// snr is written as null when unbounded.
json report_to_json(const DemodReport& r);

/// Parses text, turning syntax errors into Error(kParse).
json parse(const std::string& text);

}  // namespace kernelizer::json_io
