// Drives the kernelizer executable end to end through a shell and checks
// its JSON output against hand-worked values.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "dot_grammar.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("kernelizer_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string data(const std::string& name) { return std::string(KERNELIZER_CLI_DATA) + "/" + name; }

fs::path write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

Outcome run(const std::string& args, const std::string& stdin_text = "") {
  const fs::path in = write("stdin.txt", stdin_text);
  const fs::path out = scratch() / "stdout.txt";
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = std::string("'") + KERNELIZER_CLI + "' " + args + " < '" + in.string() +
                          "' > '" + out.string() + "' 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = slurp(out);
  o.err = slurp(err);
  return o;
}

std::vector<json> lines(const std::string& text) {
  std::vector<json> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

json single(const Outcome& o) {
  EXPECT_EQ(o.code, 0) << o.err;
  const auto ls = lines(o.out);
  EXPECT_EQ(ls.size(), 1u) << o.out;
  return ls.empty() ? json() : ls[0];
}

std::vector<long long> ints(const json& tensor) { return tensor.at("data").get<std::vector<long long>>(); }

}  // namespace

TEST(CliFactorize, MatrixKernelAndMap) {
  const json j = single(run("factorize " + data("matrix5.json")));
  EXPECT_EQ(j["kernel"], json({2, 5, 3, 9, 7}));
  EXPECT_EQ(j["kernel_size"], 5);
  EXPECT_EQ(ints(j["ymap"]), (std::vector<long long>{1, 2, 1, 3, 0, 4, 0, 5, 0, 4, 1, 3}));
  EXPECT_EQ(j["unique"], true);
}

TEST(CliFactorize, ZeroTensorHasEmptyKernel) {
  const json j = single(run("factorize " + data("zeros.json")));
  EXPECT_EQ(j["kernel_size"], 0);
  EXPECT_TRUE(j["kernel"].empty());
}

TEST(CliFactorize, FloatsNeedPrecision) {
  EXPECT_EQ(run("factorize " + data("real_tensor.json")).code, 3);
  const json j = single(run("factorize " + data("real_tensor.json") + " --precision 0.5"));
  EXPECT_EQ(j["kernel"], json({0.5, 1.5, 1.0, 2.0}));
}

TEST(CliFactorize, ReadsStdin) {
  const json j = single(run("factorize -", slurp(data("dot_tensor.json"))));
  EXPECT_EQ(j["kernel"], json({2, 3, 4}));
}

TEST(CliMultiply, DirectDot) {
  const json j = single(run("multiply " + data("dot_tensor.json") + " " + data("dot_vector.json")));
  EXPECT_EQ(j["result"], 72);
  EXPECT_EQ(j["ops"]["muls"], 12);
}

TEST(CliMultiply, DirectMatvecHalvesMultiplies) {
  const json j = single(run("multiply " + data("matrix.json") + " " + data("matrix_vector.json")));
  EXPECT_EQ(ints(j["result"]), (std::vector<long long>{18, 12, 13, 16}));
  EXPECT_EQ(j["ops"]["muls"], 6);
  EXPECT_EQ(j["ratios"]["muls"]["num"], 1);
  EXPECT_EQ(j["ratios"]["muls"]["den"], 2);
}

TEST(CliMultiply, RecursiveDot) {
  const json j = single(
      run("multiply --mode recursive " + data("dot_tensor.json") + " " + data("dot_vector.json")));
  EXPECT_EQ(ints(j["result"]), (std::vector<long long>{72, 75, 70, 69}));
  EXPECT_DOUBLE_EQ(j["ratios"]["muls"]["value"].get<double>(), 0.75);
}

TEST(CliMultiply, RecursiveMatvecColumnsAreShifts) {
  const json j = single(
      run("multiply -m recursive " + data("matrix.json") + " " + data("matrix_vector.json")));
  EXPECT_EQ(j["result"]["shape"], json({4, 3}));
  EXPECT_EQ(ints(j["result"]), (std::vector<long long>{18, 14, 13, 12, 17, 16, 13, 18, 14, 16, 12, 17}));
  EXPECT_EQ(j["ratios"]["muls"]["den"], 6);
}

TEST(CliMultiply, IterativeDotPrintsEveryStep) {
  const auto ls = lines(
      run("multiply --mode iterative " + data("dot_tensor.json") + " " + data("dot_stream.txt")).out);
  ASSERT_EQ(ls.size(), 4u);
  const std::vector<int> expected{10, 32, 53, 72};
  for (std::size_t s = 0; s < 4; ++s) {
    EXPECT_EQ(ls[s]["step"], s + 1);
    EXPECT_EQ(ls[s]["result"], expected[s]);
    EXPECT_EQ(ls[s]["ops"]["muls"], 3);
  }
}

TEST(CliMultiply, IterativeMatvec) {
  const auto ls = lines(
      run("multiply --mode iterative " + data("matrix.json") + " " + data("matrix_stream.txt")).out);
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ints(ls[0]["result"]), (std::vector<long long>{6, 0, 0, 6}));
  EXPECT_EQ(ints(ls[1]["result"]), (std::vector<long long>{13, 4, 6, 9}));
  EXPECT_EQ(ints(ls[2]["result"]), (std::vector<long long>{18, 12, 13, 16}));
  for (const auto& l : ls) EXPECT_EQ(l["ratios"]["muls"]["den"], 6);
}

TEST(CliMultiply, FirstAxis) {
  // Column sums weighted by [1, 1, 1, 1].
  const fs::path v = write("ones.json", "[1, 1, 1, 1]");
  const json j = single(run("multiply --axis 1 " + data("matrix.json") + " " + v.string()));
  EXPECT_EQ(ints(j["result"]), (std::vector<long long>{7, 7, 6}));
}

TEST(CliMultiply, ShapeMismatchExitsFour) {
  EXPECT_EQ(run("multiply " + data("matrix.json") + " " + data("dot_vector.json")).code, 4);
}

TEST(CliErrors, MalformedJsonExitsTwo) {
  const Outcome o = run("factorize " + data("malformed.json"));
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("error"), std::string::npos);
  EXPECT_TRUE(o.out.empty());
}

TEST(CliErrors, MalformedSchemeExitsTwo) {
  const fs::path s = write("bad_scheme.json", R"({"kernel": [1], "q": [[2, 1, 1, -1, 0]]})");
  EXPECT_EQ(run("run " + s.string() + " " + data("dot_stream.txt")).code, 2);
}

TEST(CliErrors, UnknownSubcommandFails) { EXPECT_NE(run("transmogrify").code, 0); }

TEST(CliSynthesize, SchemeReproducesSlidingProduct) {
  const fs::path scheme = scratch() / "dot_scheme.json";
  const Outcome syn = run("synthesize " + data("dot_tensor.json") + " -o " + scheme.string());
  ASSERT_EQ(syn.code, 0) << syn.err;
  EXPECT_NE(syn.err.find("L=3"), std::string::npos);
  const json s = json::parse(slurp(scheme));
  EXPECT_EQ(s["delta"], 0);

  const auto ls = lines(run("run " + scheme.string() + " " + data("dot_stream.txt")).out);
  ASSERT_EQ(ls.size(), 4u);
  const std::vector<long long> expected{10, 32, 53, 72};
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(ints(ls[k]), std::vector<long long>{expected[k]});
}

TEST(CliSynthesize, AdderDelayShiftsOutput) {
  const fs::path scheme = scratch() / "dot_scheme_d1.json";
  ASSERT_EQ(run("synthesize -d 1 " + data("dot_tensor.json") + " -o " + scheme.string()).code, 0);
  const json s = json::parse(slurp(scheme));
  const long long lag = s["delta"].get<long long>();
  const auto ls = lines(run("run " + scheme.string() + " -", "5\n6\n7\n8\n0\n0\n0\n").out);
  ASSERT_EQ(ls.size(), 7u);
  const std::vector<long long> expected{10, 32, 53, 72};
  for (long long t = 0; t < 4 + lag; ++t) {
    const long long src = t - lag;
    const long long want = src >= 0 ? expected[static_cast<std::size_t>(src)] : 0;
    EXPECT_EQ(ints(ls[static_cast<std::size_t>(t)])[0], want) << "step " << t;
  }
}

TEST(CliSynthesize, MatvecSchemeFromStdinStream) {
  const fs::path scheme = scratch() / "mat_scheme.json";
  ASSERT_EQ(run("synthesize " + data("matrix.json") + " -o " + scheme.string()).code, 0);
  const auto ls = lines(run("run " + scheme.string(), "[2, 3, 4]").out);
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ints(ls[2]), (std::vector<long long>{18, 12, 13, 16}));
}

TEST(CliRun, EmptyStreamPrintsNothing) {
  const fs::path scheme = scratch() / "empty_scheme.json";
  ASSERT_EQ(run("synthesize " + data("dot_tensor.json") + " -o " + scheme.string()).code, 0);
  const Outcome o = run("run " + scheme.string() + " -", "");
  EXPECT_EQ(o.code, 0);
  EXPECT_TRUE(o.out.empty());
}

TEST(CliRun, MalformedStreamExitsFive) {
  const fs::path scheme = scratch() / "stream_scheme.json";
  ASSERT_EQ(run("synthesize " + data("dot_tensor.json") + " -o " + scheme.string()).code, 0);
  EXPECT_EQ(run("run " + scheme.string() + " " + data("bad_stream.txt")).code, 5);
}

TEST(CliEmitDot, ParsesAndCountsComponents) {
  const fs::path scheme = scratch() / "dot_emit.json";
  ASSERT_EQ(run("synthesize -d 1 " + data("matrix.json") + " -o " + scheme.string()).code, 0);
  const json s = json::parse(slurp(scheme));
  const Outcome o = run("emit-dot " + scheme.string());
  ASSERT_EQ(o.code, 0) << o.err;
  const auto summary = dot::check(o.out);
  EXPECT_TRUE(summary.ok) << summary.error;
  EXPECT_TRUE(summary.directed);

  const json net = single(run("emit-dot --json --scheme " + scheme.string()));
  std::size_t adders = 0, muls = 0;
  for (const auto& c : net["components"]) {
    adders += c["kind"] == "adder";
    muls += c["kind"] == "multiplier";
  }
  EXPECT_EQ(adders, s["q"].size());
  EXPECT_EQ(muls, s["kernel"].size());
}

TEST(CliDemo, SyntheticNoiselessDecodesEverySymbol) {
  const Outcome o = run("demo --synthetic n_s=1,A_l=2,A_m=1,A_s=2,seed=11,count=6");
  ASSERT_EQ(o.code, 0) << o.err;
  const auto ls = lines(o.out);
  ASSERT_EQ(ls.size(), 6u);
  for (const auto& l : ls) {
    EXPECT_EQ(l["symbol"], l["sent_symbol"]);
    EXPECT_EQ(l["argmax_row"], l["sent_row"]);
  }
  EXPECT_NE(o.err.find("decoded 6/6"), std::string::npos);
}

TEST(CliDemo, DeterministicForASeed) {
  const std::string args = "demo --synthetic n_s=1,A_l=2,A_m=2,A_s=2,seed=3,count=5,noise=0.2";
  const Outcome a = run(args);
  const Outcome b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  for (const auto& l : lines(a.out)) EXPECT_TRUE(l["snr"].is_number());
}

TEST(CliDemo, BankAndStreamFiles) {
  // Two rows over two samples: [1, 1] for symbol 1, [1, -1] for symbol 2.
  const fs::path bank = write("bank.json", R"({"shape": [2, 2], "data": [1, 1, 1, -1]})");
  const fs::path stream = write("samples.csv", "1,0\n-1,0\n1,0\n1,0\n");
  const Outcome o = run("demo --bank " + bank.string() + " --stream " + stream.string());
  ASSERT_EQ(o.code, 0) << o.err;
  const auto ls = lines(o.out);
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[0]["step"], 2);
  EXPECT_EQ(ls[0]["symbol"], 2);
  EXPECT_EQ(ls[2]["symbol"], 1);
  EXPECT_NEAR(ls[2]["power"].get<double>(), 4.0, 1e-9);
}
