#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>
#include <Eigen/Core>

#include "probsum/bounds.hpp"
#include "probsum/summation.hpp"

namespace probsum {

/// Data model for the Monte Carlo campaigns: i.i.d. Uniform(lo, hi) samples,
/// so mu_x = (lo+hi)/2 and |x_i - mu_x| <= C_x = (hi-lo)/2 by construction.
struct DataSpec {
  double lo = -1.0;
  double hi = 1.0;

  double mean() const { return (lo + hi) / 2.0; }
  double half_width() const { return (hi - lo) / 2.0; }
};

enum class Figure {
  ErrorBounds,    // percentile bands of |E_n| against the a priori bounds
  ProductGrowth,  // percentile bands of P_n = prod(1 + d_i) against 1 +- gamma_tilde
};

/// One seeded Monte Carlo campaign over a grid of problem sizes. Per-trial
/// seeds are a pure function of (master_seed, grid index, trial index), so
/// results are reproducible and schedule-independent.
struct ExperimentConfig {
  Figure figure = Figure::ErrorBounds;
  FloatFormat format = FloatFormat::bf16();
  RoundingMode mode = RoundingMode::NearestEven;
  int trials = 50;
  std::vector<std::int64_t> n_grid;  // strictly increasing
  double delta = 0.05;
  DataSpec data;
  std::uint64_t master_seed = 0;
  bool lambda_one_curves = false;  // append the empirical lambda ~ 1 columns
};

/// One aggregated grid point. Percentile fields hold |E_n| statistics for
/// ErrorBounds and P_n statistics for ProductGrowth; the env_*/bound_* fields
/// are populated per figure and left zero otherwise. NaN statistics mean
/// every trial at that n failed.
struct SeriesRow {
  std::int64_t n = 0;
  double p25 = 0.0, p50 = 0.0, p75 = 0.0, max = 0.0;
  double bound_thm51 = 0.0, bound_thm52 = 0.0, bound_classical = 0.0;
  std::int64_t violations_thm51 = 0, violations_thm52 = 0;
  double env_lo = 0.0, env_hi = 0.0;
  std::int64_t violations_env = 0;
  std::int64_t trials = 0, failed_trials = 0;
  double bound_thm51_lambda1 = 0.0, bound_thm52_lambda1 = 0.0;
  double env_lo_lambda1 = 0.0, env_hi_lambda1 = 0.0;
};

struct SeriesTable {
  Figure figure = Figure::ErrorBounds;
  bool lambda_one_curves = false;
  std::vector<SeriesRow> rows;
};

/// n i.i.d. Uniform(lo, hi) samples, reproducible from the seed. The caller
/// pre-rounds them to the experiment's format.
Eigen::VectorXd generate_data(const DataSpec& spec, Eigen::Index n, std::uint64_t seed);

/// Strictly increasing log-spaced integer grid from nmin to nmax.
std::vector<std::int64_t> log_spaced_grid(std::int64_t nmin, std::int64_t nmax, int points);

/// Default campaign grid: 30 log-spaced points from 10 to
/// min(4.5 u^-2, 1e7), covering the lambda sqrt(n) u ~ 1 crossover.
std::vector<std::int64_t> default_n_grid(const FloatFormat& fmt);

/// Percentile bands of |E_n| per grid point, with the thm51/thm52/classical
/// bound curves attached and per-theorem violation counts (|E_n| above the
/// bound). thm52 and the classical baseline get u <- 2u under stochastic
/// rounding; thm51 uses the nominal u for both modes. Overflowed trials are
/// counted in failed_trials and excluded from the statistics.
SeriesTable run_error_experiment(const ExperimentConfig& cfg);

/// Percentile bands of P_n = prod(1 + d_i) per grid point against the
/// envelope 1 +- gamma_tilde_n(delta) (u <- 2u under stochastic rounding),
/// with per-row counts of trials that left the envelope.
SeriesTable run_product_experiment(const ExperimentConfig& cfg);

/// Linear-interpolation quantiles (type-7) of `values` at each q in [0, 1].
Eigen::VectorXd percentiles(const Eigen::VectorXd& values, const Eigen::VectorXd& qs);

/// Write the table as CSV (17-significant-digit floats, header row, one
/// newline-terminated row per grid point); returns the number of data rows.
///
/// Columns (ErrorBounds):
///   n,p25,p50,p75,max,bound_thm51,bound_thm52,bound_classical,
///   violations_thm51,violations_thm52,trials,failed_trials
/// Columns (ProductGrowth):
///   n,p25,p50,p75,max,env_lo,env_hi,violations_env,trials,failed_trials
/// With lambda_one_curves, the figure's *_lambda1 columns are appended.
int emit_csv(const SeriesTable& table, std::ostream& os);

/// Per-step trace dump: k,x,exact,computed,delta,delta_lo,delta_hi,
/// forward_error. Returns the number of data rows.
int write_trace_csv(const SummationTrace& trace, std::ostream& os);

}  // namespace probsum
