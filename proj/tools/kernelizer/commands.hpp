#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace cli {

struct TensorInput {
  std::string path;
  std::optional<double> precision;
  std::optional<std::size_t> axis;  // 1-based; empty means the last axis
  std::string output;
};

struct MultiplyOptions {
  TensorInput tensor;
  std::string operand;  // vector file, or the sample stream for iterative mode
  std::string mode = "direct";
};

struct SynthesizeOptions {
  TensorInput tensor;
  std::int64_t delay = 0;
  std::int64_t channels = 1;
};

struct RunOptions {
  std::string scheme;
  std::string stream = "-";
  std::string output;
};

struct EmitOptions {
  std::string scheme;
  std::string output;
  bool json = false;
};

struct DemoOptions {
  std::string bank;
  std::string stream;
  std::string synthetic;  // "n_s=1,A_l=2,..." when no bank file is given
  int bits = 1;
  std::optional<std::size_t> hop;
  double epsilon = 1e-9;
  std::string output;
};

int cmd_factorize(const TensorInput& opt);
int cmd_multiply(const MultiplyOptions& opt);
int cmd_synthesize(const SynthesizeOptions& opt);
int cmd_run(const RunOptions& opt);
int cmd_emit_dot(const EmitOptions& opt);
int cmd_demo(const DemoOptions& opt);

}  // namespace cli
