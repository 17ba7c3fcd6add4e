#pragma once

#include <cstdint>
#include <Eigen/Core>

#include "probsum/fpemu.hpp"

namespace probsum {

/// Complete per-step record of one recursive summation in an emulated format.
///
/// With 1-based step index k (stored at vector index k-1):
///   exact_partial[k]    s_k, the carrier-precision prefix sum of `data`
///   computed_partial[k] shat_k, the format member produced at step k
///   delta[k]            d_k = (shat_k - r_k)/r_k for r_k = shat_{k-1} + x_k,
///                       with d_1 = 0 and d_k = 0 when r_k = 0
///   delta_lo/hi[k]      the predictable interval [a_k, b_k] around r_k
///   forward_error[k]    E_k = shat_k - s_k
/// `subnormal_steps` counts rounded results that landed in the format's
/// subnormal range, where the relative-perturbation model does not apply.
struct SummationTrace {
  Eigen::VectorXd data;
  Eigen::VectorXd exact_partial;
  Eigen::VectorXd computed_partial;
  Eigen::VectorXd delta;
  Eigen::VectorXd delta_lo;
  Eigen::VectorXd delta_hi;
  Eigen::VectorXd forward_error;
  FloatFormat format;
  RoundingMode mode;
  std::uint64_t seed = 0;
  Eigen::Index subnormal_steps = 0;

  Eigen::Index size() const { return data.size(); }

  /// 2-norm of [s_2, ..., s_n] (0 when n = 1), as used by the structural bounds.
  double partial_sum_norm() const {
    const Eigen::Index n = size();
    return n < 2 ? 0.0 : exact_partial.segment(1, n - 1).norm();
  }
};

/// Round every element to the format with nearest-even; the conventional
/// pre-pass so that summation inputs are exactly representable.
Eigen::VectorXd round_to_format(const Eigen::VectorXd& data, const FloatFormat& fmt);

/// Left-to-right summation of `data` in the emulated format, recording every
/// step. Requires n >= 1 and every element representable in `fmt` (pre-round
/// with round_to_format). The seed drives stochastic rounding only;
/// NearestEven traces are seed-independent. Throws OverflowError (with the
/// failing step index attached) if a partial sum leaves the format's range.
SummationTrace recursive_sum(const Eigen::VectorXd& data, const FloatFormat& fmt,
                             RoundingMode mode, std::uint64_t seed);

/// Residual of the forward-error identity
///   E_k = sum_{i=2}^k s_i d_i prod_{j=i+1}^k (1 + d_j),
/// evaluated from the recorded s_i, d_i. Returns the max over k of
/// |RHS_k - E_k| / (1 + |s_k|); both the per-step recurrence and the direct
/// suffix-product form at k = n are checked. The identity is exact in real
/// arithmetic, so the residual is pure carrier roundoff.
double check_error_identity(const SummationTrace& trace);

/// Running products P_k = prod_{i=1}^k (1 + d_i), carrier precision.
Eigen::VectorXd product_trajectory(const SummationTrace& trace);

}  // namespace probsum
