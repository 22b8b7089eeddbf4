#include "commands.hpp"

#include <algorithm>
#include <iostream>
#include <random>
#include <sstream>

#include <kernelizer/kernelizer.hpp>

#include "cli_io.hpp"

namespace cli {

namespace {

namespace kz = kernelizer;
namespace jio = kernelizer::json_io;
using kz::Complex;
using kz::DenseTensor;
using kz::ErrorCode;

ScalarKind widest(ScalarKind a, ScalarKind b) { return std::max(a, b); }

std::size_t resolve_axis(const std::optional<std::size_t>& axis, std::size_t rank) {
  if (!axis) return rank - 1;
  kz::require(*axis >= 1 && *axis <= rank, ErrorCode::kUnsupportedAxis,
              "--axis " + std::to_string(*axis) + " is outside 1.." + std::to_string(rank));
  return *axis - 1;
}

template <typename T>
DenseTensor<T> axis_last(const DenseTensor<T>& t, std::size_t axis) {
  if (axis + 1 == t.rank()) return t;
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < t.rank(); ++k)
    if (k != axis) order.push_back(k);
  order.push_back(axis);
  return kz::permute(t, order);
}

struct LoadedTensor {
  json j;
  double epsilon = 1;
  ScalarKind kind = ScalarKind::kInteger;
};

LoadedTensor load_tensor(const TensorInput& in) {
  LoadedTensor lt;
  lt.j = read_json(in.path);
  if (!lt.j.is_object() || !lt.j.contains("data"))
    jio::parse_error("tensor must be an object with \"shape\" and \"data\"");
  lt.epsilon = resolve_precision(lt.j, in.precision);
  lt.kind = effective_kind(jio::detect_kind(lt.j.at("data")), lt.epsilon);
  log(Level::kDebug, "precision " + std::to_string(lt.epsilon));
  return lt;
}

template <typename T>
kz::Factorization<T> factorize_input(const DenseTensor<T>& t, double epsilon) {
  auto f = kz::factorize(kz::round_to_precision(t, epsilon));
  log(Level::kInfo, "kernel size " + std::to_string(f.kernel_size()) + " for shape " +
                        t.shape().to_string());
  return f;
}

template <typename T>
json scalar_or_tensor(const DenseTensor<T>& t, bool scalar) {
  return scalar ? jio::scalar_to_json(t[0]) : jio::tensor_to_json(t);
}

json counted_json(const kz::OpCount& ops, const kz::OpCount& naive) {
  return {{"ops", jio::op_count_to_json(ops)},
          {"naive", jio::op_count_to_json(naive)},
          {"ratios", jio::ratios_to_json(kz::op_ratios(ops, naive))}};
}

std::string trim_newline(std::string s) {
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

}  // namespace

int cmd_factorize(const TensorInput& opt) {
  const LoadedTensor in = load_tensor(opt);
  Sink out(opt.output);
  dispatch(in.kind, [&]<typename T>() {
    const auto t = jio::tensor_from_json<T>(in.j);
    const auto rounded = kz::round_to_precision(t, in.epsilon);
    const auto f = kz::factorize(rounded);
    const auto bound = kz::kernel_size_bound(rounded, in.epsilon);
    json j = jio::factorization_to_json(f);
    j["kernel_size"] = f.kernel_size();
    j["bound"] = {{"stated", bound.stated}, {"grid", bound.grid}};
    // Only meaningful for matrices and up with a nonempty kernel.
    j["unique"] = t.rank() >= 2 && f.kernel_size() >= 1
                      ? json(kz::uniqueness_bound(t.shape(), f.kernel_size()))
                      : json(nullptr);
    out.line(j.dump());
  });
  return kOk;
}

int cmd_multiply(const MultiplyOptions& opt) {
  if (opt.mode != "direct" && opt.mode != "recursive" && opt.mode != "iterative")
    kz::fail(ErrorCode::kInvalidArgument, "unknown mode " + opt.mode);
  const LoadedTensor in = load_tensor(opt.tensor);
  const bool iterative = opt.mode == "iterative";
  const std::string operand_text = read_text(opt.operand);
  json operand;
  ScalarKind kind = in.kind;
  if (iterative) {
    kind = widest(kind, stream_kind(operand_text));
  } else {
    operand = jio::parse(operand_text);
    kind = widest(kind, jio::detect_kind(operand));
  }
  Sink out(opt.tensor.output);

  dispatch(kind, [&]<typename T>() {
    const auto t = jio::tensor_from_json<T>(in.j);
    const std::size_t axis = resolve_axis(opt.tensor.axis, t.rank());
    const bool vector = t.rank() == 1;

    if (iterative) {
      const auto samples = parse_stream<T>(operand_text);
      const auto f = factorize_input(axis_last(t, axis), in.epsilon);
      auto window = kz::make_window(f);
      const kz::OpCount naive = kz::naive_ops_tensor_vec(f.shape(), f.shape().rank() - 1);
      std::uint64_t step = 0;
      for (const T& x : samples) {
        const auto r = kz::iterative_tensor_vec_step(window, f, x, f.shape().rank() - 1);
        json line = {{"step", ++step}, {"result", scalar_or_tensor(r.value, vector)}};
        line.update(counted_json(r.ops, naive));
        out.line(line.dump());
      }
      return;
    }

    const auto v = jio::vector_from_json<T>(operand);
    if (v.size() != t.shape().extent(axis))
      kz::fail(ErrorCode::kShapeMismatch, "vector has " + std::to_string(v.size()) +
                                              " elements, axis " + std::to_string(axis + 1) +
                                              " of " + t.shape().to_string() + " needs " +
                                              std::to_string(t.shape().extent(axis)));
    const auto f = factorize_input(t, in.epsilon);
    json line;
    if (opt.mode == "direct") {
      const auto r = kz::tensor_vec(f, std::span<const T>(v), axis);
      line = {{"result", scalar_or_tensor(r.value, vector)}};
      line.update(counted_json(r.ops, kz::naive_ops_tensor_vec(t.shape(), axis)));
    } else {
      const auto r = t.rank() == 2 && axis == 1
                         ? kz::recursive_matvec(f, std::span<const T>(v))
                         : kz::recursive_tensor_vec(f, std::span<const T>(v), axis);
      line = {{"result", jio::tensor_to_json(r.value)}};
      line.update(counted_json(r.ops, kz::naive_ops_recursive(t.shape(), axis)));
    }
    out.line(line.dump());
  });
  return kOk;
}

int cmd_synthesize(const SynthesizeOptions& opt) {
  const LoadedTensor in = load_tensor(opt.tensor);
  kz::SynthesisConfig cfg;
  cfg.epsilon = in.epsilon;
  cfg.adder_delay = opt.delay;
  cfg.sigma = opt.channels;
  Sink out(opt.tensor.output);
  dispatch(in.kind, [&]<typename T>() {
    const auto t = jio::tensor_from_json<T>(in.j);
    const auto s = kz::synthesize(axis_last(t, resolve_axis(opt.tensor.axis, t.rank())), cfg);
    out.line(jio::scheme_to_json(s).dump());
    std::cerr << "L=" << s.kernel_size() << " omega=" << s.combination_count()
              << " delta=" << s.delta << '\n';
  });
  return kOk;
}

int cmd_run(const RunOptions& opt) {
  const json sj = read_json(opt.scheme);
  if (!sj.is_object() || !sj.contains("kernel")) jio::parse_error("scheme is missing \"kernel\"");
  const std::string text = read_text(opt.stream);
  const ScalarKind kind = widest(jio::detect_kind(sj.at("kernel")), stream_kind(text));
  Sink out(opt.output);
  dispatch(kind, [&]<typename T>() {
    kz::StreamingEngine<T> engine(jio::scheme_from_json<T>(sj));
    const auto samples = parse_stream<T>(text);
    kz::OpCount ops;
    for (const T& x : samples) out.line(jio::tensor_to_json(engine.push(x, &ops)).dump());
    log(Level::kInfo, std::to_string(samples.size()) + " samples, " + std::to_string(ops.muls) +
                          " multiplications, " + std::to_string(ops.adds) + " additions");
  });
  return kOk;
}

int cmd_emit_dot(const EmitOptions& opt) {
  const json sj = read_json(opt.scheme);
  if (!sj.is_object() || !sj.contains("kernel")) jio::parse_error("scheme is missing \"kernel\"");
  Sink out(opt.output);
  dispatch(jio::detect_kind(sj.at("kernel")), [&]<typename T>() {
    const auto net = kz::build_netlist(jio::scheme_from_json<T>(sj));
    out.line(opt.json ? jio::emit_json(net) : trim_newline(kz::emit_dot(net)));
  });
  return kOk;
}

namespace {

struct Synthetic {
  kz::FilterBankConfig cfg;
  std::uint64_t seed = 1;
  std::size_t count = 8;
  double noise = 0;
};

Synthetic parse_synthetic(const std::string& settings, int bits) {
  Synthetic s;
  s.cfg.bits_per_symbol = bits;
  std::istringstream is(settings);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    kz::require(eq != std::string::npos, ErrorCode::kInvalidArgument,
                "synthetic settings are key=value, got \"" + item + "\"");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "n_s") s.cfg.bits_per_symbol = std::stoi(value);
      else if (key == "A_l") s.cfg.sequence_symbols = std::stoi(value);
      else if (key == "A_m") s.cfg.modulation_variants = std::stoi(value);
      else if (key == "A_s") s.cfg.samples_per_symbol = std::stoi(value);
      else if (key == "seed") s.seed = std::stoull(value);
      else if (key == "count") s.count = std::stoul(value);
      else if (key == "noise") s.noise = std::stod(value);
      else kz::fail(ErrorCode::kInvalidArgument, "unknown synthetic setting " + key);
    } catch (const std::logic_error&) {
      kz::fail(ErrorCode::kInvalidArgument, "bad value for " + key + ": " + value);
    }
  }
  return s;
}

std::size_t rows_per_symbol(std::size_t rows, int bits) {
  kz::require(bits >= 0 && bits < 31, ErrorCode::kInvalidArgument, "--bits out of range");
  const std::size_t symbols = std::size_t{1} << bits;
  kz::require(rows % symbols == 0 && rows >= symbols, ErrorCode::kShapeMismatch,
              "bank has " + std::to_string(rows) + " rows, not a multiple of " +
                  std::to_string(symbols) + " symbols");
  return rows / symbols;
}

}  // namespace

int cmd_demo(const DemoOptions& opt) {
  DenseTensor<Complex> bank;
  std::vector<Complex> samples;
  std::vector<std::size_t> sent;  // 0-based rows, one per transmitted symbol
  int bits = opt.bits;
  if (!opt.synthetic.empty()) {
    const Synthetic syn = parse_synthetic(opt.synthetic, opt.bits);
    syn.cfg.validate();
    bits = syn.cfg.bits_per_symbol;
    bank = kz::build_synthetic_bank(syn.cfg, syn.seed);
    std::mt19937_64 rng(syn.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<std::size_t> pick(0, bank.shape().extent(0) - 1);
    std::normal_distribution<double> noise(0.0, syn.noise > 0 ? syn.noise : 1.0);
    for (std::size_t i = 0; i < syn.count; ++i) {
      sent.push_back(pick(rng));
      for (const Complex& x : kz::matched_waveform(bank, sent.back()))
        samples.push_back(syn.noise > 0 ? x + Complex(noise(rng), noise(rng)) : x);
    }
  } else {
    if (opt.bank.empty() || opt.stream.empty())
      kz::fail(ErrorCode::kInvalidArgument, "demo needs --bank and --stream, or --synthetic");
    bank = jio::tensor_from_json<Complex>(read_json(opt.bank));
    samples = parse_stream<Complex>(read_text(opt.stream));
  }
  kz::require(bank.rank() == 2, ErrorCode::kShapeMismatch, "filter bank must be a matrix");
  const std::size_t n = bank.shape().extent(1);
  const std::size_t k = rows_per_symbol(bank.shape().extent(0), bits);
  const std::size_t hop = opt.hop.value_or(sent.empty() ? 1 : n);
  kz::require(hop >= 1, ErrorCode::kInvalidArgument, "--hop must be positive");

  const auto f = kz::factorize(kz::round_to_precision(kz::normalize_rows(bank, 0), opt.epsilon));
  log(Level::kInfo, "bank " + bank.shape().to_string() + " kernel size " +
                        std::to_string(f.kernel_size()));
  kz::StreamDemodulator demod(f, k);
  Sink out(opt.output);
  std::size_t aligned = 0, correct = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto report = demod.push(samples[i]);
    const std::size_t step = i + 1;
    if (step < n || (step - n) % hop != 0) continue;
    json line = {{"step", step}};
    if (report) line.update(jio::report_to_json(*report));
    else line["symbol"] = nullptr;
    if (!sent.empty() && step % n == 0) {
      const std::size_t row = sent[step / n - 1] + 1;
      const std::size_t symbol = kz::symbol_of_row(row, k);
      line["sent_row"] = row;
      line["sent_symbol"] = symbol;
      ++aligned;
      if (report && report->symbol == symbol) ++correct;
    }
    out.line(line.dump());
  }
  if (!sent.empty())
    std::cerr << "decoded " << correct << "/" << aligned << " symbols\n";
  return kOk;
}

}  // namespace cli
