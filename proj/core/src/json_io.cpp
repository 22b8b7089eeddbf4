#include "kernelizer/json_io.hpp"

#include <cmath>

namespace kernelizer::json_io {

void parse_error(const std::string& what) { fail(ErrorCode::kParse, what); }

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    parse_error(e.what());
  }
}

ScalarKind detect_kind(const json& j) {
  if (j.is_number_float()) return ScalarKind::kReal;
  if (j.is_number()) return ScalarKind::kInteger;
  if (j.is_object()) {
    if (j.contains("data")) return detect_kind(j.at("data"));
    if (j.contains("kernel")) return detect_kind(j.at("kernel"));
    return ScalarKind::kInteger;
  }
  if (j.is_array()) {
    // A two-number array nested inside data is a complex scalar.
    ScalarKind kind = ScalarKind::kInteger;
    for (const json& x : j) {
      ScalarKind k;
      if (x.is_array()) {
        if (x.size() == 2 && x[0].is_number() && x[1].is_number()) k = ScalarKind::kComplex;
        else k = detect_kind(x);
      } else {
        k = detect_kind(x);
      }
      if (k > kind) kind = k;
    }
    return kind;
  }
  return ScalarKind::kInteger;
}

Shape shape_from_json(const json& j) {
  if (!j.is_array() || j.empty()) parse_error("shape must be a non-empty array");
  std::vector<std::size_t> dims;
  for (const json& d : j) {
    if (!d.is_number_integer() || d.get<std::int64_t>() < 1)
      parse_error("shape extents must be positive integers");
    dims.push_back(d.get<std::size_t>());
  }
  try {
    return Shape(std::move(dims));
  } catch (const Error& e) {
    parse_error(e.what());
  }
}

json shape_to_json(const Shape& s) {
  json out = json::array();
  for (auto d : s.dims()) out.push_back(d);
  return out;
}

namespace detail {

std::int64_t integer_field(const json& j, const char* key, std::optional<std::int64_t> fallback) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    parse_error(std::string("missing field \"") + key + "\"");
  }
  const json& v = j.at(key);
  if (!v.is_number_integer()) parse_error(std::string("field \"") + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

std::vector<CombinationRow> rows_from_json(const json& q) {
  if (!q.is_array()) parse_error("\"q\" must be an array of rows");
  std::vector<CombinationRow> rows;
  for (const json& r : q) {
    if (!r.is_array() || r.size() != 5)
      parse_error("combination rows must be [id, in1, in2, d1, d2]");
    for (const json& x : r)
      if (!x.is_number_integer()) parse_error("combination row entries must be integers");
    if (r[0].get<std::int64_t>() < 1 || r[1].get<std::int64_t>() < 1 || r[2].get<std::int64_t>() < 1)
      fail(ErrorCode::kMalformedScheme, "combination ids and operands must be >= 1");
    rows.push_back({r[0].get<Id>(), r[1].get<Id>(), r[2].get<Id>(), r[3].get<std::int64_t>(),
                    r[4].get<std::int64_t>()});
  }
  return rows;
}

}  // namespace detail

json op_count_to_json(const OpCount& c) { return {{"adds", c.adds}, {"muls", c.muls}}; }

namespace {

json ratio_json(const std::optional<Ratio>& r) {
  if (!r) return nullptr;
  return {{"num", r->num}, {"den", r->den}, {"value", r->value()}};
}

}  // namespace

json ratios_to_json(const OpRatios& r) {
  return {{"adds", ratio_json(r.adds)}, {"muls", ratio_json(r.muls)}};
}

json report_to_json(const DemodReport& r) {
  json out = {{"symbol", r.symbol}, {"argmax_row", r.argmax_row}, {"phase", r.phase},
              {"power", r.power}};
  out["snr"] = std::isfinite(r.snr) ? json(r.snr) : json(nullptr);
  return out;
}

}  // namespace kernelizer::json_io
