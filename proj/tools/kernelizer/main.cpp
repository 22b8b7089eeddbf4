#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "cli_io.hpp"
#include "commands.hpp"

namespace {

void tensor_options(CLI::App* cmd, cli::TensorInput& in, bool with_axis) {
  cmd->add_option("tensor", in.path, "tensor JSON file ('-' for stdin)")->required();
  cmd->add_option("--precision,-p", in.precision, "rounding step epsilon (> 0)");
  if (with_axis) cmd->add_option("--axis,-a", in.axis, "1-based axis to contract (default: last)");
  cmd->add_option("-o,--output", in.output, "output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factor tensors into a kernel and an index map, multiply with them, and "
               "synthesize streaming schemes."};
  app.set_version_flag("--version", "kernelizer 0.1.0");
  app.require_subcommand(1);

  cli::TensorInput factorize;
  auto* f = app.add_subcommand("factorize", "print the kernel and index map of a tensor");
  tensor_options(f, factorize, false);

  cli::MultiplyOptions multiply;
  auto* m = app.add_subcommand("multiply", "multiply a tensor by a vector or a sample stream");
  tensor_options(m, multiply.tensor, true);
  m->add_option("operand", multiply.operand, "vector JSON, or the sample stream for --mode iterative")
      ->required();
  m->add_option("--mode,-m", multiply.mode, "direct | recursive | iterative")
      ->check(CLI::IsMember({"direct", "recursive", "iterative"}));

  cli::SynthesizeOptions synthesize;
  auto* s = app.add_subcommand("synthesize", "build a shared-adder streaming scheme");
  tensor_options(s, synthesize.tensor, true);
  s->add_option("--delay,-d", synthesize.delay, "adder latency delta in clocks")
      ->check(CLI::NonNegativeNumber);
  s->add_option("--channels,-c", synthesize.channels, "interleaved channels sigma")
      ->check(CLI::PositiveNumber);

  cli::RunOptions run;
  auto* r = app.add_subcommand("run", "stream samples through a scheme");
  r->add_option("scheme", run.scheme, "scheme JSON file")->required();
  r->add_option("stream", run.stream, "sample stream file ('-' for stdin)");
  r->add_option("-o,--output", run.output, "output file (default: stdout)");

  cli::EmitOptions emit;
  auto* e = app.add_subcommand("emit-dot", "write the netlist of a scheme as Graphviz DOT");
  e->add_option("scheme,--scheme", emit.scheme, "scheme JSON file")->required();
  e->add_flag("--json", emit.json, "write the netlist as JSON instead");
  e->add_option("-o,--output", emit.output, "output file (default: stdout)");

  cli::DemoOptions demo;
  auto* d = app.add_subcommand("demo", "matched-filter demodulation over a factorized bank");
  d->add_option("--bank", demo.bank, "complex filter bank (M x N tensor JSON)");
  d->add_option("--stream", demo.stream, "received samples, one \"re,im\" per line");
  d->add_option("--synthetic", demo.synthetic,
                "build a bank and transmission: n_s=,A_l=,A_m=,A_s=,seed=,count=,noise=");
  d->add_option("--bits", demo.bits, "bits per symbol n_s")->check(CLI::NonNegativeNumber);
  d->add_option("--hop", demo.hop, "report every hop samples (default 1, or N for --synthetic)");
  d->add_option("--precision,-p", demo.epsilon, "rounding step for the normalized bank")
      ->check(CLI::PositiveNumber);
  d->add_option("-o,--output", demo.output, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : cli::kFailure;
  }

  try {
    if (*f) return cli::cmd_factorize(factorize);
    if (*m) return cli::cmd_multiply(multiply);
    if (*s) return cli::cmd_synthesize(synthesize);
    if (*r) return cli::cmd_run(run);
    if (*e) return cli::cmd_emit_dot(emit);
    if (*d) return cli::cmd_demo(demo);
  } catch (const std::exception& ex) {
    cli::log(cli::Level::kError, ex.what());
    return cli::exit_code_for(ex);
  }
  return cli::kFailure;
}
