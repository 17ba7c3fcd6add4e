#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "probsum/errors.hpp"

namespace probsum {

/// Parameters shared by the probabilistic forward-error bounds.
///
/// `u` is the effective unit roundoff as the caller wants it applied: the
/// bounds that assume independent mean-zero perturbations (thm33, thm52) need
/// u <- 2u under stochastic rounding, and that substitution is the caller's
/// responsibility. `u_note` is copied into the result for auditability.
struct BoundInputs {
  std::int64_t n = 0;          // problem size, n >= 2
  double u = 0.0;              // effective unit roundoff, u >= 0
  double failure_prob = 0.0;   // delta in (0, 1)
  double mu_x = 0.0;           // data mean
  double C_x = 0.0;            // data half-width, |x_i - mu_x| <= C_x
  std::optional<double> s_norm;  // ||[s_2..s_n]||_2, structural bounds only
  std::string u_note;
};

enum class Theorem { Lemma32, Thm33, Thm41, Thm51, Thm52, SBound, Classical };

const char* theorem_name(Theorem t);

/// An evaluated bound. `uninformative` is set when the value overflowed to
/// +inf (or the formula's validity condition failed), so large-n sweeps can
/// keep going instead of aborting.
struct BoundValue {
  double value = 0.0;
  Theorem theorem = Theorem::Classical;
  std::string effective_u_note;
  bool uninformative = false;
};

/// lambda(delta) = sqrt(2 log(2/delta)), natural log; delta in (0, 1).
/// Grows very slowly: lambda(1e-16) < 9.
double lambda(double delta);

/// gamma_tilde_n(delta) = exp((lambda(delta) sqrt(n) u + n u^2)/(1-u)) - 1,
/// the probabilistic analogue of the classical gamma_n constant. Requires
/// n >= 1, 0 <= u < 1. May overflow to +inf for large arguments.
double gamma_tilde(std::int64_t n, double delta, double u);

/// gamma_tilde with an explicit lambda value instead of lambda(delta); used
/// for the empirical "lambda ~ 1" curves.
double gamma_tilde_with_lambda(double lambda_value, std::int64_t n, double u);

/// kappa(n, delta) = lambda(delta/(n-1)) sqrt(n) u, the per-order contraction
/// factor of the structural bound. Requires n >= 2.
double kappa(std::int64_t n, double delta, double u);

/// (1 - kappa^(n-1))/(1 - kappa), the order-summing geometric factor.
/// Evaluated as the explicit partial sum sum_{i=0}^{n-2} kappa^i (compensated)
/// when |1 - kappa| < 1e-6, so the removable singularity at kappa = 1 causes
/// no cancellation; kappa = 1 returns n - 1 exactly.
double geometric_factor(double kappa_value, std::int64_t n);

/// The two branches of geometric_factor, exposed so they can be checked
/// against each other near the dispatch boundary.
double geometric_factor_direct(double kappa_value, std::int64_t n);
double geometric_factor_series(double kappa_value, std::int64_t n);

/// |E_n| <= u ||s_n|| lambda(delta/2) (1 + gamma_tilde_n(delta/2)); assumes
/// independent mean-zero perturbations with |d| <= u. Needs s_norm.
BoundValue bound_thm33(const BoundInputs& in);

/// |E_n| <= ((1 - kappa^(n-1))/(1 - kappa)) lambda ||s_n||_2 u with
/// lambda = lambda(delta/(n-1)); assumes only mean-independence, so it holds
/// unconditionally for stochastic rounding at the nominal u. Needs s_norm.
BoundValue bound_thm41(const BoundInputs& in);

/// ||s_n||_2 <= n^(3/2) |mu_x| + n C_x lambda(delta/n): a priori bound on the
/// partial-sum norm for data drawn independently from a bounded interval.
double sbound(std::int64_t n, double delta, double mu_x, double C_x);

/// A priori form of thm41: |E_n| <= geometric_factor * (lambda |mu_x| n^(3/2)
/// + lambda^2 C_x n) u with lambda = lambda(delta/n) and kappa = lambda
/// sqrt(n) u (this theorem's own lambda). Nominal u for both rounding modes.
BoundValue bound_thm51(const BoundInputs& in);

/// A priori form of thm33: |E_n| <= (1 + gamma_tilde_n(delta/3)) *
/// (lambda |mu_x| n^(3/2) + lambda^2 C_x n) u with lambda = lambda(delta/3);
/// needs u <- 2u under stochastic rounding.
BoundValue bound_thm52(const BoundInputs& in);

/// Deterministic worst-case baseline gamma_{n-1} sum|x_i| with
/// gamma_{n-1} = (n-1)u / (1 - (n-1)u); +inf and `uninformative` when
/// (n-1)u >= 1.
BoundValue classical_bound(std::int64_t n, double u, double abs_data_sum);

/// The problem size at which lambda sqrt(n) u = 1, i.e. (1/(lambda u))^2;
/// past this point the all-orders bounds grow rapidly.
double crossover_n(double lambda_val, double u);

}  // namespace probsum
