#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "probsum/bounds.hpp"
#include "probsum/fpemu.hpp"

using namespace probsum;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

std::string cli_path() {
  const char* p = std::getenv("PROBSUM_CLI");
  REQUIRE_MESSAGE(p != nullptr, "PROBSUM_CLI must point at the built binary");
  return p;
}

// Runs the CLI with stdout+stderr captured (or stdout only).
RunResult run_cli(const std::string& args, bool merge_stderr = true) {
  const std::string cmd =
      "PROBSUM_SEED= " + cli_path() + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string f17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE_MESSAGE(is.good(), ("cannot open " + path).c_str());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("top-level help matches the golden file and exits 0") {
  const RunResult r = run_cli("--help");
  CHECK(r.exit_code == 0);
  const char* src = std::getenv("PROBSUM_SOURCE_DIR");
  REQUIRE_MESSAGE(src != nullptr, "PROBSUM_SOURCE_DIR must be set");
  CHECK(r.output == read_file(std::string(src) + "/tests/golden/help.txt"));
}

TEST_CASE("subcommand help lists every flag") {
  const RunResult sum = run_cli("sum --help");
  CHECK(sum.exit_code == 0);
  for (const char* flag :
       {"--format", "--rounding", "--n", "--dist", "--seed", "--delta", "--trace"})
    CHECK_MESSAGE(sum.output.find(flag) != std::string::npos, flag);

  const RunResult bounds = run_cli("bounds --help");
  for (const char* flag :
       {"--theorem", "--n", "--u", "--format", "--delta", "--mu", "--cx", "--snorm", "--abs-sum"})
    CHECK_MESSAGE(bounds.output.find(flag) != std::string::npos, flag);

  const RunResult exp = run_cli("experiment --help");
  for (const char* flag : {"--figure", "--format", "--rounding", "--trials", "--delta", "--nmin",
                           "--nmax", "--points", "--seed", "--out", "--lambda1"})
    CHECK_MESSAGE(exp.output.find(flag) != std::string::npos, flag);

  const RunResult cross = run_cli("crossover --help");
  for (const char* flag : {"--lambda", "--format", "--u"})
    CHECK_MESSAGE(cross.output.find(flag) != std::string::npos, flag);
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_cli("").exit_code == 1);
  const RunResult bogus = run_cli("sum --n 10 --bogus-flag 3");
  CHECK(bogus.exit_code == 1);
  CHECK(bogus.output.find("--help") != std::string::npos);
  CHECK(run_cli("nonexistent-command").exit_code == 1);
  CHECK(run_cli("sum --format nope --n 10").exit_code == 1);
  CHECK(run_cli("sum --format bf16 --rounding quantum --n 10").exit_code == 1);
  CHECK(run_cli("bounds --theorem thm51 --n 100 --format bf16 --delta 0.05 --mu 0").exit_code ==
        1);  // missing --cx
  CHECK(run_cli("bounds --theorem thm41 --n 100 --format bf16 --delta 0.05").exit_code ==
        1);  // missing --snorm
  CHECK(run_cli("crossover").exit_code == 1);  // needs --u or --format
}

TEST_CASE("runtime overflow exits with code 2") {
  const RunResult r =
      run_cli("sum --format fp16 --rounding rn --n 10 --dist uniform:60000,65000 --seed 1");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("overflow") != std::string::npos);
}

TEST_CASE("sum command basics") {
  const RunResult one =
      run_cli("sum --format bf16 --rounding rn --n 1 --dist uniform:-1,1 --seed 7");
  CHECK(one.exit_code == 0);
  CHECK(one.output.find("|E_n|           = 0\n") != std::string::npos);

  const RunResult a =
      run_cli("sum --format bf16 --rounding sr --n 1000 --dist uniform:-1,1 --seed 7");
  const RunResult b =
      run_cli("sum --format bf16 --rounding sr --n 1000 --dist uniform:-1,1 --seed 7");
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output.find("thm41") != std::string::npos);
  CHECK(a.output.find("holds") != std::string::npos);
  CHECK(a.output.find("VIOLATED") == std::string::npos);
}

TEST_CASE("sum --trace writes the per-step CSV") {
  const std::string path = "cli_trace_test.csv";
  const RunResult r = run_cli("sum --format bf16 --rounding sr --n 50 --dist uniform:-1,1 "
                              "--seed 3 --trace " + path);
  CHECK(r.exit_code == 0);
  const std::string csv = read_file(path);
  CHECK(csv.rfind("k,x,exact,computed,delta,delta_lo,delta_hi,forward_error\n", 0) == 0);
  int lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 51);
  std::remove(path.c_str());
}

TEST_CASE("bounds command prints the library values") {
  const RunResult lam = run_cli("bounds --theorem lambda --delta 1e-16");
  CHECK(lam.exit_code == 0);
  CHECK(lam.output.find(f17(lambda(1e-16))) != std::string::npos);

  const RunResult t41 =
      run_cli("bounds --theorem thm41 --n 2 --format bf16 --delta 0.05 --snorm 3");
  CHECK(t41.exit_code == 0);
  CHECK(t41.output.find("geometric_factor = 1\n") != std::string::npos);

  const RunResult t51 =
      run_cli("bounds --theorem thm51 --n 10000 --format fp16 --delta 0.05 --mu 0 --cx 1");
  CHECK(t51.exit_code == 0);
  BoundInputs in{10000, FloatFormat::fp16().unit_roundoff(), 0.05, 0.0, 1.0, std::nullopt, ""};
  CHECK(t51.output.find(f17(bound_thm51(in).value)) != std::string::npos);
}

TEST_CASE("experiment command emits CSV and a summary") {
  const std::string args = "experiment --figure product-growth --format bf16 --rounding sr "
                           "--trials 3 --nmin 10 --nmax 100 --points 3 --seed 5";
  const RunResult csv_only = run_cli(args, /*merge_stderr=*/false);
  CHECK(csv_only.exit_code == 0);
  CHECK(csv_only.output.rfind("n,p25,p50,p75,max,env_lo,env_hi,violations_env,trials,"
                              "failed_trials\n", 0) == 0);
  const RunResult again = run_cli(args, /*merge_stderr=*/false);
  CHECK(csv_only.output == again.output);

  const RunResult merged = run_cli(args);
  CHECK(merged.output.find("experiment: figure=product-growth") != std::string::npos);
  CHECK(merged.output.find("violations_env=") != std::string::npos);

  const std::string out = "cli_experiment_test.csv";
  const RunResult to_file = run_cli(args + " --out " + out);
  CHECK(to_file.exit_code == 0);
  CHECK(to_file.output.find("experiment: figure=product-growth") != std::string::npos);
  const std::string written = read_file(out);
  CHECK(written == csv_only.output);
  std::remove(out.c_str());
}

TEST_CASE("experiment honors --lambda1") {
  const RunResult r = run_cli("experiment --figure error-bounds --format bf16 --rounding rn "
                              "--trials 2 --nmin 10 --nmax 20 --points 2 --seed 5 --lambda1",
                              /*merge_stderr=*/false);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("bound_thm51_lambda1,bound_thm52_lambda1") != std::string::npos);
}

TEST_CASE("default bf16 grid reaches the 3e5-scale endpoint") {
  // With --nmax omitted the bf16 grid runs from 10 up to ~4.5 u^-2 = 294912.
  const RunResult r = run_cli("experiment --figure product-growth --format bf16 --rounding rn "
                              "--trials 1 --points 3 --seed 1",
                              /*merge_stderr=*/false);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\n294912,") != std::string::npos);
  std::istringstream is(r.output);
  std::string first_data_line;
  std::getline(is, first_data_line);  // header
  std::getline(is, first_data_line);
  CHECK(first_data_line.rfind("10,", 0) == 0);
}

TEST_CASE("crossover command") {
  const RunResult bf = run_cli("crossover --format bf16");
  CHECK(bf.exit_code == 0);
  CHECK(bf.output.find(f17(crossover_n(9.0, FloatFormat::bf16().unit_roundoff()))) !=
        std::string::npos);
  const RunResult manual = run_cli("crossover --lambda 1 --u 1");
  CHECK(manual.output.find("crossover n = 1\n") != std::string::npos);
}

TEST_CASE("PROBSUM_SEED provides the default seed; --seed overrides it") {
  const std::string cmd_env = "PROBSUM_SEED=123 " + cli_path() +
                              " sum --format bf16 --rounding sr --n 100 --dist uniform:-1,1 2>&1";
  RunResult env_run;
  FILE* pipe = popen(cmd_env.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) env_run.output.append(buf, got);
  env_run.exit_code = WEXITSTATUS(pclose(pipe));

  const RunResult flag_run =
      run_cli("sum --format bf16 --rounding sr --n 100 --dist uniform:-1,1 --seed 123");
  CHECK(env_run.exit_code == 0);
  CHECK(env_run.output == flag_run.output);
}
