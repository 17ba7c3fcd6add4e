// probsum: emulate reduced-precision recursive summation, evaluate the
// probabilistic forward-error bounds, and run the Monte Carlo campaigns.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "probsum/bounds.hpp"
#include "probsum/experiments.hpp"
#include "probsum/rng.hpp"
#include "probsum/summation.hpp"

namespace {

using namespace probsum;

std::string f17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

FloatFormat parse_format(const std::string& s) {
  if (s == "fp16") return FloatFormat::fp16();
  if (s == "bf16") return FloatFormat::bf16();
  if (s.rfind("custom:", 0) == 0) {
    int p = 0, e = 0;
    if (std::sscanf(s.c_str() + 7, "%d,%d", &p, &e) == 2) return FloatFormat(p, e);
  }
  throw DomainError("--format must be fp16, bf16, or custom:p,e (got '" + s + "')");
}

RoundingMode parse_rounding(const std::string& s) {
  if (s == "rn") return RoundingMode::NearestEven;
  if (s == "sr") return RoundingMode::Stochastic;
  throw DomainError("--rounding must be rn or sr (got '" + s + "')");
}

DataSpec parse_dist(const std::string& s) {
  double lo = 0.0, hi = 0.0;
  if (std::sscanf(s.c_str(), "uniform:%lf,%lf", &lo, &hi) == 2) {
    if (!(lo < hi)) throw DomainError("--dist uniform:lo,hi requires lo < hi");
    return DataSpec{lo, hi};
  }
  throw DomainError("--dist must be uniform:lo,hi (got '" + s + "')");
}

std::string format_name(const FloatFormat& fmt) {
  if (fmt == FloatFormat::fp16()) return "fp16";
  if (fmt == FloatFormat::bf16()) return "bf16";
  return "custom:" + std::to_string(fmt.precision()) + "," + std::to_string(fmt.exponent_bits());
}

std::uint64_t env_default_seed() {
  if (const char* env = std::getenv("PROBSUM_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 0;
}

struct SumOptions {
  std::string format = "bf16";
  std::string rounding = "rn";
  std::int64_t n = 0;
  std::string dist = "uniform:-1,1";
  std::uint64_t seed = 0;
  double delta = 0.05;
  std::string trace_path;
};

void print_bound_line(const char* name, const BoundValue& bv, double err) {
  std::cout << "  " << name << " = " << f17(bv.value) << "  [" << bv.effective_u_note << "]";
  if (bv.uninformative) std::cout << "  (uninformative)";
  std::cout << (err <= bv.value ? "  holds" : "  VIOLATED") << "\n";
}

int run_sum(const SumOptions& o) {
  const FloatFormat fmt = parse_format(o.format);
  const RoundingMode mode = parse_rounding(o.rounding);
  const DataSpec spec = parse_dist(o.dist);
  if (o.n < 1) throw DomainError("--n must be at least 1");

  const Eigen::VectorXd raw = generate_data(spec, o.n, trial_seed(o.seed, 0, 0, 0));
  const Eigen::VectorXd data = round_to_format(raw, fmt);
  const SummationTrace trace = recursive_sum(data, fmt, mode, trial_seed(o.seed, 0, 0, 1));

  const double shat = trace.computed_partial[o.n - 1];
  const double s = trace.exact_partial[o.n - 1];
  const double err = std::abs(trace.forward_error[o.n - 1]);

  std::cout << "n               = " << o.n << "\n"
            << "format          = " << format_name(fmt) << " (p=" << fmt.precision()
            << ", e=" << fmt.exponent_bits() << ", u=" << f17(fmt.unit_roundoff()) << ")\n"
            << "rounding        = " << o.rounding << "\n"
            << "seed            = " << o.seed << "\n"
            << "data            = " << o.dist << " (mu_x=" << f17(spec.mean())
            << ", C_x=" << f17(spec.half_width()) << ")\n"
            << "computed sum    = " << f17(shat) << "\n"
            << "exact (carrier) = " << f17(s) << "\n"
            << "|E_n|           = " << f17(err) << "\n"
            << "relative error  = " << f17(err / std::abs(s)) << "\n"
            << "subnormal steps = " << trace.subnormal_steps << "\n";

  if (o.n >= 2) {
    const double u = fmt.unit_roundoff();
    const bool sr = mode == RoundingMode::Stochastic;
    const double u_ind = sr ? 2.0 * u : u;
    const char* ind_note = sr ? "2u substitution for stochastic rounding" : "nominal";
    const double snorm = trace.partial_sum_norm();
    const double abs_sum = data.cwiseAbs().sum();

    std::cout << "bounds at delta = " << f17(o.delta) << " (||s_2..s_n||_2 = " << f17(snorm)
              << ", sum|x_i| = " << f17(abs_sum) << "):\n";
    print_bound_line("thm33    ",
                     bound_thm33({o.n, u_ind, o.delta, spec.mean(), spec.half_width(), snorm,
                                  ind_note}),
                     err);
    print_bound_line("thm41    ",
                     bound_thm41({o.n, u, o.delta, spec.mean(), spec.half_width(), snorm,
                                  "nominal"}),
                     err);
    print_bound_line("thm51    ",
                     bound_thm51({o.n, u, o.delta, spec.mean(), spec.half_width(), std::nullopt,
                                  "nominal"}),
                     err);
    print_bound_line("thm52    ",
                     bound_thm52({o.n, u_ind, o.delta, spec.mean(), spec.half_width(),
                                  std::nullopt, ind_note}),
                     err);
    print_bound_line("classical", classical_bound(o.n, u_ind, abs_sum), err);
  } else {
    std::cout << "bounds          = (not applicable for n = 1)\n";
  }

  if (!o.trace_path.empty()) {
    std::ofstream os(o.trace_path);
    if (!os) throw IoError("cannot open trace output file '" + o.trace_path + "'");
    write_trace_csv(trace, os);
    if (!os.good()) {
      os.close();
      std::remove(o.trace_path.c_str());
      throw IoError("failed writing trace to '" + o.trace_path + "'");
    }
    std::cout << "trace           = " << o.trace_path << "\n";
  }
  return 0;
}

struct BoundsOptions {
  std::string theorem;
  std::int64_t n = 0;
  bool has_n = false;
  double u = 0.0;
  bool has_u = false;
  std::string format;
  double delta = 0.0;
  bool has_delta = false;
  double mu = 0.0;
  double cx = 0.0;
  bool has_mu = false, has_cx = false;
  double snorm = 0.0;
  bool has_snorm = false;
  double abs_sum = 0.0;
  bool has_abs_sum = false;
};

double resolve_u(const BoundsOptions& o) {
  if (o.has_u) return o.u;
  if (!o.format.empty()) return parse_format(o.format).unit_roundoff();
  throw DomainError("this theorem needs --u or --format");
}

void need(bool present, const char* flag) {
  if (!present) throw DomainError(std::string("missing required parameter ") + flag);
}

int run_bounds(const BoundsOptions& o) {
  const std::string& t = o.theorem;
  std::cout << "theorem = " << t << "\n";
  if (t == "lambda") {
    need(o.has_delta, "--delta");
    std::cout << "lambda  = " << f17(lambda(o.delta)) << "\n";
    return 0;
  }
  if (t == "gamma") {
    need(o.has_n, "--n");
    need(o.has_delta, "--delta");
    const double u = resolve_u(o);
    std::cout << "lambda      = " << f17(lambda(o.delta)) << "\n"
              << "gamma_tilde = " << f17(gamma_tilde(o.n, o.delta, u)) << "\n";
    return 0;
  }
  if (t == "kappa") {
    need(o.has_n, "--n");
    need(o.has_delta, "--delta");
    const double u = resolve_u(o);
    std::cout << "lambda = " << f17(lambda(o.delta / static_cast<double>(o.n - 1))) << "\n"
              << "kappa  = " << f17(kappa(o.n, o.delta, u)) << "\n";
    return 0;
  }
  if (t == "sbound") {
    need(o.has_n, "--n");
    need(o.has_delta, "--delta");
    need(o.has_mu, "--mu");
    need(o.has_cx, "--cx");
    std::cout << "lambda = " << f17(lambda(o.delta / static_cast<double>(o.n))) << "\n"
              << "sbound = " << f17(sbound(o.n, o.delta, o.mu, o.cx)) << "\n";
    return 0;
  }
  if (t == "classical") {
    need(o.has_n, "--n");
    need(o.has_abs_sum, "--abs-sum");
    const double u = resolve_u(o);
    const BoundValue bv = classical_bound(o.n, u, o.abs_sum);
    std::cout << "value = " << f17(bv.value) << "  [" << bv.effective_u_note << "]"
              << (bv.uninformative ? "  (uninformative)" : "") << "\n";
    return 0;
  }

  need(o.has_n, "--n");
  need(o.has_delta, "--delta");
  const double u = resolve_u(o);
  BoundInputs in;
  in.n = o.n;
  in.u = u;
  in.failure_prob = o.delta;
  in.mu_x = o.mu;
  in.C_x = o.cx;
  in.u_note = "as given";
  if (o.has_snorm) in.s_norm = o.snorm;

  BoundValue bv;
  if (t == "thm33") {
    need(o.has_snorm, "--snorm");
    bv = bound_thm33(in);
    std::cout << "lambda      = " << f17(lambda(o.delta / 2.0)) << "\n"
              << "gamma_tilde = " << f17(gamma_tilde(o.n, o.delta / 2.0, u)) << "\n";
  } else if (t == "thm41") {
    need(o.has_snorm, "--snorm");
    bv = bound_thm41(in);
    const double k = kappa(o.n, o.delta, u);
    std::cout << "lambda           = " << f17(lambda(o.delta / static_cast<double>(o.n - 1)))
              << "\n"
              << "kappa            = " << f17(k) << "\n"
              << "geometric_factor = " << f17(geometric_factor(k, o.n)) << "\n";
  } else if (t == "thm51") {
    need(o.has_mu, "--mu");
    need(o.has_cx, "--cx");
    bv = bound_thm51(in);
    const double lam = lambda(o.delta / static_cast<double>(o.n));
    const double k = lam * std::sqrt(static_cast<double>(o.n)) * u;
    std::cout << "lambda           = " << f17(lam) << "\n"
              << "kappa            = " << f17(k) << "\n"
              << "geometric_factor = " << f17(geometric_factor(k, o.n)) << "\n";
  } else if (t == "thm52") {
    need(o.has_mu, "--mu");
    need(o.has_cx, "--cx");
    bv = bound_thm52(in);
    std::cout << "lambda      = " << f17(lambda(o.delta / 3.0)) << "\n"
              << "gamma_tilde = " << f17(gamma_tilde(o.n, o.delta / 3.0, u)) << "\n";
  } else {
    throw DomainError("unknown --theorem '" + t +
                      "' (expected lambda|gamma|kappa|sbound|thm33|thm41|thm51|thm52|classical)");
  }
  std::cout << "value = " << f17(bv.value) << "  [" << bv.effective_u_note << "]"
            << (bv.uninformative ? "  (uninformative)" : "") << "\n";
  return 0;
}

struct ExperimentOptions {
  std::string figure = "error-bounds";
  std::string format = "bf16";
  std::string rounding = "rn";
  int trials = 50;
  double delta = 0.05;
  std::int64_t nmin = 10;
  std::int64_t nmax = 0;  // 0: format default
  int points = 30;
  std::uint64_t seed = 0;
  std::string out;
  bool lambda1 = false;
};

int run_experiment(const ExperimentOptions& o) {
  ExperimentConfig cfg;
  cfg.format = parse_format(o.format);
  cfg.mode = parse_rounding(o.rounding);
  cfg.trials = o.trials;
  cfg.delta = o.delta;
  cfg.master_seed = o.seed;
  cfg.lambda_one_curves = o.lambda1;
  const std::int64_t nmax = o.nmax > 0 ? o.nmax : default_n_grid(cfg.format).back();
  cfg.n_grid = log_spaced_grid(o.nmin, nmax, o.points);

  SeriesTable table;
  if (o.figure == "error-bounds") {
    cfg.figure = Figure::ErrorBounds;
    table = run_error_experiment(cfg);
  } else if (o.figure == "product-growth") {
    cfg.figure = Figure::ProductGrowth;
    table = run_product_experiment(cfg);
  } else {
    throw DomainError("--figure must be error-bounds or product-growth (got '" + o.figure + "')");
  }

  std::int64_t v51 = 0, v52 = 0, venv = 0, failed = 0;
  for (const SeriesRow& r : table.rows) {
    v51 += r.violations_thm51;
    v52 += r.violations_thm52;
    venv += r.violations_env;
    failed += r.failed_trials;
  }
  std::ostringstream summary;
  summary << "experiment: figure=" << o.figure << " format=" << format_name(cfg.format)
          << " rounding=" << o.rounding << " trials=" << o.trials << " rows="
          << table.rows.size() << " failed_trials=" << failed;
  if (cfg.figure == Figure::ErrorBounds)
    summary << " violations_thm51=" << v51 << " violations_thm52=" << v52;
  else
    summary << " violations_env=" << venv;

  if (o.out.empty()) {
    emit_csv(table, std::cout);
    std::cerr << summary.str() << "\n";
  } else {
    std::ofstream os(o.out);
    if (!os) throw IoError("cannot open output file '" + o.out + "'");
    try {
      emit_csv(table, os);
      os.flush();
      if (!os.good()) throw IoError("failed writing CSV to '" + o.out + "'");
    } catch (...) {
      os.close();
      std::remove(o.out.c_str());
      throw;
    }
    std::cout << summary.str() << "\n";
  }
  return 0;
}

struct CrossoverOptions {
  double lambda_val = 9.0;
  std::string format;
  double u = 0.0;
  bool has_u = false;
};

int run_crossover(const CrossoverOptions& o) {
  double u = 0.0;
  if (o.has_u) {
    u = o.u;
  } else if (!o.format.empty()) {
    u = parse_format(o.format).unit_roundoff();
  } else {
    throw DomainError("crossover needs --u or --format");
  }
  std::cout << "lambda      = " << f17(o.lambda_val) << "\n"
            << "u           = " << f17(u) << "\n"
            << "crossover n = " << f17(crossover_n(o.lambda_val, u)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probsum: reduced-precision summation emulator and probabilistic error bounds"};
  app.name("probsum");
  app.require_subcommand(1);
  const std::uint64_t seed_default = env_default_seed();

  SumOptions sum_opts;
  sum_opts.seed = seed_default;
  CLI::App* sum_cmd = app.add_subcommand("sum", "Run one recursive summation and report the error against each bound");
  sum_cmd->add_option("--format", sum_opts.format, "Emulated format: fp16|bf16|custom:p,e")->capture_default_str();
  sum_cmd->add_option("--rounding", sum_opts.rounding, "Rounding mode: rn|sr")->capture_default_str();
  sum_cmd->add_option("--n", sum_opts.n, "Number of summands")->required();
  sum_cmd->add_option("--dist", sum_opts.dist, "Data distribution: uniform:lo,hi")->capture_default_str();
  sum_cmd->add_option("--seed", sum_opts.seed, "Master seed (default: PROBSUM_SEED or 0)");
  sum_cmd->add_option("--delta", sum_opts.delta, "Failure probability for the bounds")->capture_default_str();
  sum_cmd->add_option("--trace", sum_opts.trace_path, "Write the per-step trace CSV to this path");

  BoundsOptions b_opts;
  CLI::App* bounds_cmd = app.add_subcommand("bounds", "Evaluate one bound or auxiliary quantity");
  bounds_cmd->add_option("--theorem", b_opts.theorem, "lambda|gamma|kappa|sbound|thm33|thm41|thm51|thm52|classical")->required();
  auto* bn = bounds_cmd->add_option("--n", b_opts.n, "Problem size");
  auto* bu = bounds_cmd->add_option("--u", b_opts.u, "Unit roundoff (overrides --format)");
  bounds_cmd->add_option("--format", b_opts.format, "Format supplying u: fp16|bf16|custom:p,e");
  auto* bd = bounds_cmd->add_option("--delta", b_opts.delta, "Failure probability in (0,1)");
  auto* bm = bounds_cmd->add_option("--mu", b_opts.mu, "Data mean mu_x");
  auto* bc = bounds_cmd->add_option("--cx", b_opts.cx, "Data half-width C_x");
  auto* bs = bounds_cmd->add_option("--snorm", b_opts.snorm, "Partial-sum norm ||s_2..s_n||_2");
  auto* ba = bounds_cmd->add_option("--abs-sum", b_opts.abs_sum, "sum |x_i| for the classical bound");

  ExperimentOptions e_opts;
  e_opts.seed = seed_default;
  CLI::App* exp_cmd = app.add_subcommand("experiment", "Run a Monte Carlo campaign and emit its CSV table");
  exp_cmd->add_option("--figure", e_opts.figure, "error-bounds|product-growth")->capture_default_str();
  exp_cmd->add_option("--format", e_opts.format, "Emulated format: fp16|bf16|custom:p,e")->capture_default_str();
  exp_cmd->add_option("--rounding", e_opts.rounding, "Rounding mode: rn|sr")->capture_default_str();
  exp_cmd->add_option("--trials", e_opts.trials, "Trials per grid point")->capture_default_str();
  exp_cmd->add_option("--delta", e_opts.delta, "Failure probability for the bound curves")->capture_default_str();
  exp_cmd->add_option("--nmin", e_opts.nmin, "Smallest problem size")->capture_default_str();
  exp_cmd->add_option("--nmax", e_opts.nmax, "Largest problem size (default: min(4.5/u^2, 1e7))");
  exp_cmd->add_option("--points", e_opts.points, "Grid points (log-spaced)")->capture_default_str();
  exp_cmd->add_option("--seed", e_opts.seed, "Master seed (default: PROBSUM_SEED or 0)");
  exp_cmd->add_option("--out", e_opts.out, "CSV output path (default: stdout, summary to stderr)");
  exp_cmd->add_flag("--lambda1", e_opts.lambda1, "Append the empirical lambda~1 curve columns");

  CrossoverOptions c_opts;
  CLI::App* cross_cmd = app.add_subcommand("crossover", "Problem size where lambda*sqrt(n)*u = 1");
  cross_cmd->add_option("--lambda", c_opts.lambda_val, "lambda value")->capture_default_str();
  cross_cmd->add_option("--format", c_opts.format, "Format supplying u: fp16|bf16|custom:p,e");
  auto* cu = cross_cmd->add_option("--u", c_opts.u, "Unit roundoff (overrides --format)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  b_opts.has_n = bn->count() > 0;
  b_opts.has_u = bu->count() > 0;
  b_opts.has_delta = bd->count() > 0;
  b_opts.has_mu = bm->count() > 0;
  b_opts.has_cx = bc->count() > 0;
  b_opts.has_snorm = bs->count() > 0;
  b_opts.has_abs_sum = ba->count() > 0;
  c_opts.has_u = cu->count() > 0;

  try {
    if (*sum_cmd) return run_sum(sum_opts);
    if (*bounds_cmd) return run_bounds(b_opts);
    if (*exp_cmd) return run_experiment(e_opts);
    if (*cross_cmd) return run_crossover(c_opts);
  } catch (const OverflowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
