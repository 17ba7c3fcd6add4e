#include "probsum/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace probsum {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw DomainError(msg);
}

// The bound formulas are evaluated in long double internally: kappa^(n-1)
// amplifies any rounding of kappa by a factor n-1, so binary64 intermediates
// could not meet the 1e-12 agreement contract at large n.

long double lambda_l(long double delta) { return sqrtl(2.0L * logl(2.0L / delta)); }

long double gamma_tilde_l(long double lam, long long n, long double u) {
  const long double nd = static_cast<long double>(n);
  return expm1l((lam * sqrtl(nd) * u + nd * u * u) / (1.0L - u));
}

long double geometric_direct_l(long double k, std::int64_t n) {
  if (k == 0.0L) return 1.0L;
  // (1 - k^(n-1))/(1 - k) = expm1((n-1) log1p(k-1)) / (k-1); no cancellation.
  const long double km1 = k - 1.0L;
  return expm1l(static_cast<long double>(n - 1) * log1pl(km1)) / km1;
}

long double geometric_series_l(long double k, std::int64_t n) {
  long double sum = 1.0L;
  for (std::int64_t i = 1; i <= n - 2; ++i)
    sum += powl(k, static_cast<long double>(i));
  return sum;
}

long double geometric_l(long double k, std::int64_t n) {
  if (k == 1.0L) return static_cast<long double>(n - 1);
  if (fabsl(1.0L - k) < 1e-6L && n - 1 <= 10'000'000)
    return geometric_series_l(k, n);
  return geometric_direct_l(k, n);
}

std::string u_note_for(const BoundInputs& in) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "u=%.17g", in.u);
  std::string note = buf;
  if (!in.u_note.empty()) note += " (" + in.u_note + ")";
  return note;
}

void check_common(const BoundInputs& in) {
  require(in.n >= 2, "bound inputs: n must be at least 2");
  require(in.u >= 0.0, "bound inputs: u must be nonnegative");
  require(in.failure_prob > 0.0 && in.failure_prob < 1.0,
          "bound inputs: failure probability must lie in (0, 1)");
  require(in.C_x >= 0.0, "bound inputs: C_x must be nonnegative");
}

BoundValue finish(long double value, Theorem tag, const BoundInputs& in) {
  const double v = static_cast<double>(value);
  return BoundValue{v, tag, u_note_for(in), !std::isfinite(v)};
}

}  // namespace

const char* theorem_name(Theorem t) {
  switch (t) {
    case Theorem::Lemma32: return "lemma32";
    case Theorem::Thm33: return "thm33";
    case Theorem::Thm41: return "thm41";
    case Theorem::Thm51: return "thm51";
    case Theorem::Thm52: return "thm52";
    case Theorem::SBound: return "sbound";
    case Theorem::Classical: return "classical";
  }
  return "unknown";
}

double lambda(double delta) {
  require(delta > 0.0 && delta < 1.0, "lambda: delta must lie in (0, 1)");
  return static_cast<double>(lambda_l(delta));
}

double gamma_tilde_with_lambda(double lambda_value, std::int64_t n, double u) {
  require(n >= 1, "gamma_tilde: n must be at least 1");
  require(u >= 0.0 && u < 1.0, "gamma_tilde: u must lie in [0, 1)");
  require(lambda_value >= 0.0, "gamma_tilde: lambda must be nonnegative");
  return static_cast<double>(gamma_tilde_l(lambda_value, n, u));
}

double gamma_tilde(std::int64_t n, double delta, double u) {
  require(n >= 1, "gamma_tilde: n must be at least 1");
  require(u >= 0.0 && u < 1.0, "gamma_tilde: u must lie in [0, 1)");
  require(delta > 0.0 && delta < 1.0, "gamma_tilde: delta must lie in (0, 1)");
  return static_cast<double>(gamma_tilde_l(lambda_l(delta), n, u));
}

double kappa(std::int64_t n, double delta, double u) {
  require(n >= 2, "kappa: n must be at least 2");
  require(u >= 0.0, "kappa: u must be nonnegative");
  require(delta > 0.0 && delta < 1.0, "kappa: delta must lie in (0, 1)");
  return static_cast<double>(lambda_l(static_cast<long double>(delta) / (n - 1)) *
                             sqrtl(static_cast<long double>(n)) * u);
}

double geometric_factor_direct(double kappa_value, std::int64_t n) {
  return static_cast<double>(geometric_direct_l(kappa_value, n));
}

double geometric_factor_series(double kappa_value, std::int64_t n) {
  return static_cast<double>(geometric_series_l(kappa_value, n));
}

double geometric_factor(double kappa_value, std::int64_t n) {
  require(kappa_value >= 0.0, "geometric_factor: kappa must be nonnegative");
  require(n >= 2, "geometric_factor: n must be at least 2");
  return static_cast<double>(geometric_l(kappa_value, n));
}

BoundValue bound_thm33(const BoundInputs& in) {
  check_common(in);
  if (!in.s_norm) throw MissingNormError("bound_thm33: s_norm is required");
  require(*in.s_norm >= 0.0, "bound_thm33: s_norm must be nonnegative");
  const long double half = static_cast<long double>(in.failure_prob) / 2.0L;
  const long double value = static_cast<long double>(in.u) * *in.s_norm * lambda_l(half) *
                            (1.0L + gamma_tilde_l(lambda_l(half), in.n, in.u));
  return finish(value, Theorem::Thm33, in);
}

BoundValue bound_thm41(const BoundInputs& in) {
  check_common(in);
  if (!in.s_norm) throw MissingNormError("bound_thm41: s_norm is required");
  require(*in.s_norm >= 0.0, "bound_thm41: s_norm must be nonnegative");
  const long double lam = lambda_l(static_cast<long double>(in.failure_prob) / (in.n - 1));
  const long double kap = lam * sqrtl(static_cast<long double>(in.n)) * in.u;
  const long double value = geometric_l(kap, in.n) * lam * *in.s_norm * in.u;
  return finish(value, Theorem::Thm41, in);
}

double sbound(std::int64_t n, double delta, double mu_x, double C_x) {
  require(n >= 1, "sbound: n must be at least 1");
  require(delta > 0.0 && delta < 1.0, "sbound: delta must lie in (0, 1)");
  require(C_x >= 0.0, "sbound: C_x must be nonnegative");
  const long double nd = static_cast<long double>(n);
  return static_cast<double>(powl(nd, 1.5L) * fabsl(mu_x) +
                             nd * C_x * lambda_l(static_cast<long double>(delta) / nd));
}

BoundValue bound_thm51(const BoundInputs& in) {
  check_common(in);
  const long double nd = static_cast<long double>(in.n);
  // This theorem's own lambda is lambda(delta/n), and its kappa uses it.
  const long double lam = lambda_l(static_cast<long double>(in.failure_prob) / nd);
  const long double kap = lam * sqrtl(nd) * in.u;
  const long double value =
      geometric_l(kap, in.n) *
      (lam * fabsl(in.mu_x) * powl(nd, 1.5L) + lam * lam * in.C_x * nd) * in.u;
  return finish(value, Theorem::Thm51, in);
}

BoundValue bound_thm52(const BoundInputs& in) {
  check_common(in);
  const long double nd = static_cast<long double>(in.n);
  const long double third = static_cast<long double>(in.failure_prob) / 3.0L;
  const long double lam = lambda_l(third);
  const long double value =
      (1.0L + gamma_tilde_l(lam, in.n, in.u)) *
      (lam * fabsl(in.mu_x) * powl(nd, 1.5L) + lam * lam * in.C_x * nd) * in.u;
  return finish(value, Theorem::Thm52, in);
}

BoundValue classical_bound(std::int64_t n, double u, double abs_data_sum) {
  require(n >= 1, "classical_bound: n must be at least 1");
  require(u >= 0.0, "classical_bound: u must be nonnegative");
  require(abs_data_sum >= 0.0, "classical_bound: abs_data_sum must be nonnegative");
  char buf[64];
  std::snprintf(buf, sizeof buf, "u=%.17g", u);
  const double t = static_cast<double>(n - 1) * u;
  if (t >= 1.0) {
    return BoundValue{std::numeric_limits<double>::infinity(), Theorem::Classical,
                      std::string(buf) + " ((n-1)u >= 1)", true};
  }
  return BoundValue{t / (1.0 - t) * abs_data_sum, Theorem::Classical, buf, false};
}

double crossover_n(double lambda_val, double u) {
  require(lambda_val > 0.0, "crossover_n: lambda must be positive");
  require(u > 0.0, "crossover_n: u must be positive");
  const double z = 1.0 / (lambda_val * u);
  return z * z;
}

}  // namespace probsum
