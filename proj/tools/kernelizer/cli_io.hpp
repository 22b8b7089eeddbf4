#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <kernelizer/json_io.hpp>
#include <kernelizer/scalar.hpp>

namespace cli {

using nlohmann::json;
using kernelizer::json_io::ScalarKind;

// Exit statuses shared by every subcommand.
enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kMalformedInput = 2,
  kMissingPrecision = 3,
  kShapeMismatch = 4,
  kMalformedStream = 5,
};

struct MissingPrecision : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StreamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(const std::exception& e);

// KERNELIZER_LOG selects the stderr verbosity: error, warn (default), info,
// debug, or 0-3.
enum class Level { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };
void log(Level level, const std::string& message);

/// Whole file, or stdin for "-" / empty.
std::string read_text(const std::string& path);
json read_json(const std::string& path);

/// Writes to the file, or stdout for "-" / empty. Each call appends a line
/// when the sink is stdout; files are truncated on first use.
class Sink {
 public:
  explicit Sink(std::string path);
  ~Sink();
  Sink(const Sink&) = delete;
  Sink& operator=(const Sink&) = delete;
  void line(const std::string& text);

 private:
  std::string path_;
  std::FILE* file_ = nullptr;
};

bool has_float(const json& j);

/// Precision to round a tensor with. Without an explicit value, tensors
/// holding floating-point numbers are refused.
double resolve_precision(const json& tensor, const std::optional<double>& given);

/// Integer data rounded with a fractional step has to go through doubles.
ScalarKind effective_kind(ScalarKind kind, double precision);

/// Stream samples: a JSON array (numbers, or [re, im] pairs) or text with
/// one value per line / comma-separated values. Complex text lines are
/// "re,im" (a lone number is real).
template <typename T>
std::vector<T> parse_stream(const std::string& text);

ScalarKind stream_kind(const std::string& text);

/// Calls f.template operator()<T>() with T chosen by kind.
template <typename F>
decltype(auto) dispatch(ScalarKind kind, F&& f) {
  switch (kind) {
    case ScalarKind::kInteger: return f.template operator()<std::int64_t>();
    case ScalarKind::kReal: return f.template operator()<double>();
    case ScalarKind::kComplex: break;
  }
  return f.template operator()<kernelizer::Complex>();
}

}  // namespace cli
