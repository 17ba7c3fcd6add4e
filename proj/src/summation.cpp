#include "probsum/summation.hpp"

#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "probsum/rng.hpp"

namespace probsum {

Eigen::VectorXd round_to_format(const Eigen::VectorXd& data, const FloatFormat& fmt) {
  Eigen::VectorXd out(data.size());
  for (Eigen::Index i = 0; i < data.size(); ++i) out[i] = round_nearest(data[i], fmt);
  return out;
}

SummationTrace recursive_sum(const Eigen::VectorXd& data, const FloatFormat& fmt,
                             RoundingMode mode, std::uint64_t seed) {
  const Eigen::Index n = data.size();
  if (n == 0) throw EmptyInputError("recursive_sum: data must not be empty");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!is_representable(data[i], fmt))
      throw DomainError("recursive_sum: data[" + std::to_string(i) +
                        "] is not representable in the format; pre-round with round_to_format");
  }

  Eigen::VectorXd exact(n), computed(n), delta(n), delta_lo(n), delta_hi(n), ferr(n);
  std::mt19937_64 rng(seed);

  exact[0] = data[0];
  computed[0] = data[0];
  delta[0] = delta_lo[0] = delta_hi[0] = 0.0;
  ferr[0] = 0.0;
  Eigen::Index subnormal_steps = 0;

  for (Eigen::Index i = 1; i < n; ++i) {
    const double r = computed[i - 1] + data[i];  // carrier-precision pre-rounding sum
    exact[i] = exact[i - 1] + data[i];
    if (std::abs(r) > fmt.max_finite()) {
      OverflowError err(r, "recursive_sum: partial sum overflowed the format at step " +
                               std::to_string(i + 1));
      err.index = i + 1;
      throw err;
    }
    double rounded = r, a = 0.0, b = 0.0, d = 0.0;
    if (r != 0.0) {
      const NeighborPair nb = neighbors(r, fmt);
      if (nb.lo == nb.hi) {
        rounded = r;  // exact addition: no rounding, no randomness
      } else if (mode == RoundingMode::NearestEven) {
        rounded = round_nearest(r, fmt);
      } else {
        rounded = round_stochastic(r, fmt, rng);
      }
      a = (nb.lo - r) / r;
      b = (nb.hi - r) / r;
      if (a > b) std::swap(a, b);
      d = (rounded - r) / r;
    }
    computed[i] = rounded;
    delta[i] = d;
    delta_lo[i] = a;
    delta_hi[i] = b;
    ferr[i] = computed[i] - exact[i];
    if (is_subnormal(computed[i], fmt)) ++subnormal_steps;
  }

  return SummationTrace{
      .data = data,
      .exact_partial = std::move(exact),
      .computed_partial = std::move(computed),
      .delta = std::move(delta),
      .delta_lo = std::move(delta_lo),
      .delta_hi = std::move(delta_hi),
      .forward_error = std::move(ferr),
      .format = fmt,
      .mode = mode,
      .seed = seed,
      .subnormal_steps = subnormal_steps,
  };
}

double check_error_identity(const SummationTrace& trace) {
  const Eigen::Index n = trace.size();
  double max_residual = 0.0;

  // Per-step recurrence RHS_k = RHS_{k-1}(1 + d_k) + s_k d_k.
  double rhs = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    rhs = rhs * (1.0 + trace.delta[i]) + trace.exact_partial[i] * trace.delta[i];
    const double res =
        std::abs(rhs - trace.forward_error[i]) / (1.0 + std::abs(trace.exact_partial[i]));
    max_residual = std::max(max_residual, res);
  }

  // Direct sum-of-suffix-products form at k = n.
  if (n >= 2) {
    double sum = 0.0, suffix = 1.0;
    for (Eigen::Index i = n - 1; i >= 1; --i) {
      sum += trace.exact_partial[i] * trace.delta[i] * suffix;
      suffix *= 1.0 + trace.delta[i];
    }
    const double res =
        std::abs(sum - trace.forward_error[n - 1]) / (1.0 + std::abs(trace.exact_partial[n - 1]));
    max_residual = std::max(max_residual, res);
  }
  return max_residual;
}

Eigen::VectorXd product_trajectory(const SummationTrace& trace) {
  const Eigen::Index n = trace.size();
  Eigen::VectorXd prod(n);
  double p = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    p *= 1.0 + trace.delta[i];
    prod[i] = p;
  }
  return prod;
}

}  // namespace probsum
