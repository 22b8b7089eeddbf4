#include "cli_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace cli {

using kernelizer::Complex;
using kernelizer::Error;
using kernelizer::ErrorCode;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const MissingPrecision*>(&e)) return kMissingPrecision;
  if (dynamic_cast<const StreamError*>(&e)) return kMalformedStream;
  if (dynamic_cast<const json::exception*>(&e)) return kMalformedInput;
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->code()) {
      case ErrorCode::kParse:
      case ErrorCode::kMalformedScheme:
      case ErrorCode::kCorruptFactorization: return kMalformedInput;
      case ErrorCode::kShapeMismatch: return kShapeMismatch;
      default: return kFailure;
    }
  }
  return kFailure;
}

namespace {

Level configured_level() {
  const char* env = std::getenv("KERNELIZER_LOG");
  if (!env) return Level::kWarn;
  std::string v(env);
  for (auto& c : v) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (v == "error" || v == "0") return Level::kError;
  if (v == "info" || v == "2") return Level::kInfo;
  if (v == "debug" || v == "3") return Level::kDebug;
  return Level::kWarn;
}

const char* level_name(Level l) {
  switch (l) {
    case Level::kError: return "error";
    case Level::kWarn: return "warn";
    case Level::kInfo: return "info";
    case Level::kDebug: return "debug";
  }
  return "";
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      else if (c == ',') throw StreamError("empty field in \"" + line + "\"");
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

template <typename N>
N number(const std::string& tok) {
  N value{};
  const char* first = tok.data();
  if (!tok.empty() && tok[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw StreamError("cannot read \"" + tok + "\" as a " +
                      (std::is_integral_v<N> ? "integer" : "number"));
  return value;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace

void log(Level level, const std::string& message) {
  static const Level threshold = configured_level();
  if (level <= threshold) std::cerr << "kernelizer: " << level_name(level) << ": " << message << '\n';
}

std::string read_text(const std::string& path) {
  if (path.empty() || path == "-")
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

json read_json(const std::string& path) { return kernelizer::json_io::parse(read_text(path)); }

Sink::Sink(std::string path) : path_(std::move(path)) {
  if (!path_.empty() && path_ != "-") {
    file_ = std::fopen(path_.c_str(), "w");
    if (!file_) throw std::runtime_error("cannot write " + path_);
  }
}

Sink::~Sink() {
  if (file_) std::fclose(file_);
}

void Sink::line(const std::string& text) {
  std::FILE* f = file_ ? file_ : stdout;
  std::fwrite(text.data(), 1, text.size(), f);
  std::fputc('\n', f);
}

bool has_float(const json& j) {
  if (j.is_number_float()) return true;
  if (j.is_array() || j.is_object())
    for (const auto& x : j)
      if (has_float(x)) return true;
  return false;
}

double resolve_precision(const json& tensor, const std::optional<double>& given) {
  if (given) {
    if (!std::isfinite(*given) || *given <= 0)
      throw Error(ErrorCode::kInvalidPrecision, "--precision must be a positive number");
    return *given;
  }
  const json& data = tensor.is_object() && tensor.contains("data") ? tensor.at("data") : tensor;
  if (has_float(data))
    throw MissingPrecision("tensor holds floating-point values; pass --precision");
  return 1.0;
}

ScalarKind effective_kind(ScalarKind kind, double precision) {
  if (kind == ScalarKind::kInteger && precision != std::floor(precision)) return ScalarKind::kReal;
  return kind;
}

ScalarKind stream_kind(const std::string& text) {
  const std::string body = trim(text);
  if (!body.empty() && body[0] == '[') {
    try {
      return kernelizer::json_io::detect_kind(json::parse(body));
    } catch (const json::exception& e) {
      throw StreamError(std::string("malformed JSON stream: ") + e.what());
    }
  }
  for (char c : body)
    if (c == '.' || c == 'e' || c == 'E' || c == 'n' || c == 'N') return ScalarKind::kReal;
  return ScalarKind::kInteger;
}

template <typename T>
std::vector<T> parse_stream(const std::string& text) {
  const std::string body = trim(text);
  std::vector<T> out;
  if (!body.empty() && body[0] == '[') {
    json j;
    try {
      j = json::parse(body);
    } catch (const json::exception& e) {
      throw StreamError(std::string("malformed JSON stream: ") + e.what());
    }
    try {
      for (const json& x : j) out.push_back(kernelizer::json_io::scalar_from_json<T>(x));
    } catch (const Error& e) {
      throw StreamError(std::string("bad stream sample: ") + e.what());
    }
    return out;
  }
  for (const std::string& line : lines_of(body)) {
    const auto toks = tokens(line);
    if constexpr (kernelizer::is_complex_v<T>) {
      if (toks.size() == 1) out.emplace_back(number<double>(toks[0]), 0.0);
      else if (toks.size() == 2) out.emplace_back(number<double>(toks[0]), number<double>(toks[1]));
      else throw StreamError("complex samples are written \"re,im\", got \"" + line + "\"");
    } else {
      for (const auto& t : toks) out.push_back(number<T>(t));
    }
  }
  return out;
}

template std::vector<std::int64_t> parse_stream<std::int64_t>(const std::string&);
template std::vector<double> parse_stream<double>(const std::string&);
template std::vector<Complex> parse_stream<Complex>(const std::string&);

}  // namespace cli
