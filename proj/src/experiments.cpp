#include "probsum/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <string>

#include "probsum/rng.hpp"

namespace probsum {

namespace {

std::string f17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void validate(const ExperimentConfig& cfg, Figure expected) {
  if (cfg.figure != expected)
    throw DomainError("experiment: config figure does not match the requested experiment");
  if (cfg.trials < 1) throw DomainError("experiment: trials must be at least 1");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
    throw DomainError("experiment: delta must lie in (0, 1)");
  if (!(cfg.data.lo < cfg.data.hi))
    throw DomainError("experiment: data interval must satisfy lo < hi");
  if (!cfg.n_grid.empty() && cfg.n_grid.front() < 1)
    throw DomainError("experiment: n must be at least 1");
  for (std::size_t i = 0; i + 1 < cfg.n_grid.size(); ++i)
    if (cfg.n_grid[i] >= cfg.n_grid[i + 1])
      throw DomainError("experiment: n_grid must be strictly increasing");
}

// Aggregates one grid point's per-trial values into the row's percentile
// fields. Values from failed trials are simply absent.
void aggregate(SeriesRow& row, std::vector<double>& values) {
  if (values.empty()) {
    row.p25 = row.p50 = row.p75 = row.max = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  Eigen::Vector3d qs(0.25, 0.50, 0.75);
  const Eigen::VectorXd p = percentiles(v, qs);
  row.p25 = p[0];
  row.p50 = p[1];
  row.p75 = p[2];
  row.max = v.maxCoeff();
}

// Effective roundoff for the model that assumes |d| <= u: stochastic rounding
// realizes |d| <= 2u, so those formulas get u <- 2u.
double independent_model_u(const ExperimentConfig& cfg) {
  const double u = cfg.format.unit_roundoff();
  return cfg.mode == RoundingMode::Stochastic ? 2.0 * u : u;
}

const char* u_note_for_mode(const ExperimentConfig& cfg) {
  return cfg.mode == RoundingMode::Stochastic ? "2u substitution for stochastic rounding"
                                              : "nominal";
}

}  // namespace

Eigen::VectorXd generate_data(const DataSpec& spec, Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double width = spec.hi - spec.lo;
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = spec.lo + width * uniform01(rng);
  return out;
}

std::vector<std::int64_t> log_spaced_grid(std::int64_t nmin, std::int64_t nmax, int points) {
  if (nmin < 1 || nmax < nmin) throw DomainError("log_spaced_grid: need 1 <= nmin <= nmax");
  if (points < 1) throw DomainError("log_spaced_grid: need at least one point");
  std::vector<std::int64_t> grid;
  grid.reserve(points);
  const double la = std::log(static_cast<double>(nmin));
  const double lb = std::log(static_cast<double>(nmax));
  for (int i = 0; i < points; ++i) {
    std::int64_t n;
    if (i == 0) {
      n = nmin;
    } else if (i == points - 1) {
      n = nmax;
    } else {
      const double t = static_cast<double>(i) / static_cast<double>(points - 1);
      n = std::llround(std::exp(la + t * (lb - la)));
    }
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  return grid;
}

std::vector<std::int64_t> default_n_grid(const FloatFormat& fmt) {
  const double u = fmt.unit_roundoff();
  const double raw = 4.5 / (u * u);
  const std::int64_t cap = raw >= 1e7 ? 10'000'000 : std::llround(raw);
  return log_spaced_grid(10, cap, 30);
}

SeriesTable run_error_experiment(const ExperimentConfig& cfg) {
  validate(cfg, Figure::ErrorBounds);
  const double u = cfg.format.unit_roundoff();
  const double u_ind = independent_model_u(cfg);
  const double mu = cfg.data.mean();
  const double cx = cfg.data.half_width();
  const double worst_abs_sum_per_element = std::max(std::abs(cfg.data.lo), std::abs(cfg.data.hi));

  SeriesTable table{cfg.figure, cfg.lambda_one_curves, {}};
  table.rows.reserve(cfg.n_grid.size());

  for (std::size_t i_n = 0; i_n < cfg.n_grid.size(); ++i_n) {
    const std::int64_t n = cfg.n_grid[i_n];
    SeriesRow row;
    row.n = n;
    row.trials = cfg.trials;

    if (n >= 2) {
      BoundInputs in51{n, u, cfg.delta, mu, cx, std::nullopt, "nominal"};
      BoundInputs in52{n, u_ind, cfg.delta, mu, cx, std::nullopt, u_note_for_mode(cfg)};
      row.bound_thm51 = bound_thm51(in51).value;
      row.bound_thm52 = bound_thm52(in52).value;
      row.bound_classical =
          classical_bound(n, u_ind, static_cast<double>(n) * worst_abs_sum_per_element).value;
      if (cfg.lambda_one_curves) {
        const double nd = static_cast<double>(n);
        const double amp = std::abs(mu) * std::pow(nd, 1.5) + cx * nd;
        row.bound_thm51_lambda1 = geometric_factor(std::sqrt(nd) * u, n) * amp * u;
        row.bound_thm52_lambda1 = (1.0 + gamma_tilde_with_lambda(1.0, n, u_ind)) * amp * u_ind;
      }
    }

    std::vector<double> errors;
    errors.reserve(cfg.trials);
    for (int t = 0; t < cfg.trials; ++t) {
      const Eigen::VectorXd raw =
          generate_data(cfg.data, n, trial_seed(cfg.master_seed, i_n, t, 0));
      try {
        const Eigen::VectorXd rounded = round_to_format(raw, cfg.format);
        const SummationTrace trace =
            recursive_sum(rounded, cfg.format, cfg.mode, trial_seed(cfg.master_seed, i_n, t, 1));
        const double err = std::abs(trace.forward_error[n - 1]);
        errors.push_back(err);
        if (n >= 2) {
          if (err > row.bound_thm51) ++row.violations_thm51;
          if (err > row.bound_thm52) ++row.violations_thm52;
        }
      } catch (const OverflowError&) {
        ++row.failed_trials;
      }
    }
    aggregate(row, errors);
    table.rows.push_back(row);
  }
  return table;
}

SeriesTable run_product_experiment(const ExperimentConfig& cfg) {
  validate(cfg, Figure::ProductGrowth);
  const double u_ind = independent_model_u(cfg);

  SeriesTable table{cfg.figure, cfg.lambda_one_curves, {}};
  table.rows.reserve(cfg.n_grid.size());

  for (std::size_t i_n = 0; i_n < cfg.n_grid.size(); ++i_n) {
    const std::int64_t n = cfg.n_grid[i_n];
    SeriesRow row;
    row.n = n;
    row.trials = cfg.trials;

    const double gt = gamma_tilde(n, cfg.delta, u_ind);
    row.env_lo = 1.0 - gt;
    row.env_hi = 1.0 + gt;
    if (cfg.lambda_one_curves) {
      const double gt1 = gamma_tilde_with_lambda(1.0, n, u_ind);
      row.env_lo_lambda1 = 1.0 - gt1;
      row.env_hi_lambda1 = 1.0 + gt1;
    }

    std::vector<double> products;
    products.reserve(cfg.trials);
    for (int t = 0; t < cfg.trials; ++t) {
      const Eigen::VectorXd raw =
          generate_data(cfg.data, n, trial_seed(cfg.master_seed, i_n, t, 0));
      try {
        const Eigen::VectorXd rounded = round_to_format(raw, cfg.format);
        const SummationTrace trace =
            recursive_sum(rounded, cfg.format, cfg.mode, trial_seed(cfg.master_seed, i_n, t, 1));
        const double pn = product_trajectory(trace)[n - 1];
        products.push_back(pn);
        if (pn < row.env_lo || pn > row.env_hi) ++row.violations_env;
      } catch (const OverflowError&) {
        ++row.failed_trials;
      }
    }
    aggregate(row, products);
    table.rows.push_back(row);
  }
  return table;
}

Eigen::VectorXd percentiles(const Eigen::VectorXd& values, const Eigen::VectorXd& qs) {
  if (values.size() == 0) throw EmptyInputError("percentiles: values must not be empty");
  std::vector<double> sorted(values.data(), values.data() + values.size());
  std::sort(sorted.begin(), sorted.end());
  const auto m = static_cast<Eigen::Index>(sorted.size());
  Eigen::VectorXd out(qs.size());
  for (Eigen::Index i = 0; i < qs.size(); ++i) {
    const double q = qs[i];
    if (q < 0.0 || q > 1.0) throw DomainError("percentiles: q must lie in [0, 1]");
    const double h = q * static_cast<double>(m - 1);
    const auto lo = static_cast<Eigen::Index>(std::floor(h));
    const double frac = h - static_cast<double>(lo);
    out[i] = (lo + 1 < m) ? sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]) : sorted[lo];
  }
  return out;
}

int emit_csv(const SeriesTable& table, std::ostream& os) {
  if (table.figure == Figure::ErrorBounds) {
    os << "n,p25,p50,p75,max,bound_thm51,bound_thm52,bound_classical,"
          "violations_thm51,violations_thm52,trials,failed_trials";
    if (table.lambda_one_curves) os << ",bound_thm51_lambda1,bound_thm52_lambda1";
    os << "\n";
    for (const SeriesRow& r : table.rows) {
      os << r.n << ',' << f17(r.p25) << ',' << f17(r.p50) << ',' << f17(r.p75) << ','
         << f17(r.max) << ',' << f17(r.bound_thm51) << ',' << f17(r.bound_thm52) << ','
         << f17(r.bound_classical) << ',' << r.violations_thm51 << ',' << r.violations_thm52
         << ',' << r.trials << ',' << r.failed_trials;
      if (table.lambda_one_curves)
        os << ',' << f17(r.bound_thm51_lambda1) << ',' << f17(r.bound_thm52_lambda1);
      os << "\n";
    }
  } else {
    os << "n,p25,p50,p75,max,env_lo,env_hi,violations_env,trials,failed_trials";
    if (table.lambda_one_curves) os << ",env_lo_lambda1,env_hi_lambda1";
    os << "\n";
    for (const SeriesRow& r : table.rows) {
      os << r.n << ',' << f17(r.p25) << ',' << f17(r.p50) << ',' << f17(r.p75) << ','
         << f17(r.max) << ',' << f17(r.env_lo) << ',' << f17(r.env_hi) << ','
         << r.violations_env << ',' << r.trials << ',' << r.failed_trials;
      if (table.lambda_one_curves)
        os << ',' << f17(r.env_lo_lambda1) << ',' << f17(r.env_hi_lambda1);
      os << "\n";
    }
  }
  if (!os) throw IoError("emit_csv: write failed");
  return static_cast<int>(table.rows.size());
}

int write_trace_csv(const SummationTrace& trace, std::ostream& os) {
  os << "k,x,exact,computed,delta,delta_lo,delta_hi,forward_error\n";
  for (Eigen::Index i = 0; i < trace.size(); ++i) {
    os << (i + 1) << ',' << f17(trace.data[i]) << ',' << f17(trace.exact_partial[i]) << ','
       << f17(trace.computed_partial[i]) << ',' << f17(trace.delta[i]) << ','
       << f17(trace.delta_lo[i]) << ',' << f17(trace.delta_hi[i]) << ','
       << f17(trace.forward_error[i]) << "\n";
  }
  if (!os) throw IoError("write_trace_csv: write failed");
  return static_cast<int>(trace.size());
}

}  // namespace probsum
