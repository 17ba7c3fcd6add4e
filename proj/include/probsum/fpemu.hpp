#pragma once

#include <random>
#include <utility>

#include "probsum/errors.hpp"

namespace probsum {

/// A reduced-precision binary floating-point format, emulated exactly with
/// binary64 as the carrier: every representable value of the format is itself
/// a binary64 value.
///
/// `precision` counts significand bits including the implicit leading bit,
/// so the unit roundoff is u = 2^-precision. Constraints: precision >= 2,
/// 2 <= exponent_bits <= 11 and precision + exponent_bits <= 53, which keeps
/// the format's whole range (subnormals included) inside binary64.
class FloatFormat {
 public:
  FloatFormat(int precision, int exponent_bits, bool subnormals_enabled = true);

  /// IEEE binary16: p = 11, e = 5, u = 2^-11.
  static FloatFormat fp16() { return FloatFormat(11, 5); }
  /// bfloat16: p = 8, e = 8, u = 2^-8.
  static FloatFormat bf16() { return FloatFormat(8, 8); }

  int precision() const { return precision_; }
  int exponent_bits() const { return exponent_bits_; }
  bool subnormals_enabled() const { return subnormals_; }

  double unit_roundoff() const;  // 2^-p
  int min_exponent() const;      // smallest normal exponent, 2 - 2^(e-1)
  int max_exponent() const;      // 2^(e-1) - 1
  double min_normal() const;     // 2^min_exponent
  double min_subnormal() const;  // 2^(min_exponent - p + 1)
  double max_finite() const;     // (2 - 2^(1-p)) * 2^max_exponent

  bool operator==(const FloatFormat&) const = default;

 private:
  int precision_;
  int exponent_bits_;
  bool subnormals_;
};

enum class RoundingMode {
  NearestEven,  // deterministic round-to-nearest, ties to even significand
  Stochastic,   // round up with probability (x - lo)/(hi - lo)
};

/// The enclosing representable pair: lo is the largest representable value
/// <= x and hi the smallest representable value >= x; lo == hi exactly when
/// x is representable.
struct NeighborPair {
  double lo;
  double hi;
};

/// Throws DomainError for non-finite x and OverflowError when |x| exceeds
/// the largest finite representable value.
NeighborPair neighbors(double x, const FloatFormat& fmt);

/// Round to the nearest representable value, ties to the even significand.
/// For x in the normal range the result r satisfies r = x(1+d), |d| <= u.
double round_nearest(double x, const FloatFormat& fmt);

/// Round up with probability p = (x - lo)/(hi - lo), down otherwise.
/// Representable inputs are returned unchanged and consume no randomness,
/// so traces replay identically regardless of how many steps are exact.
/// For x in the normal range the realized |d| is at most 2u.
double round_stochastic(double x, const FloatFormat& fmt, std::mt19937_64& rng);

/// The predictable interval [a, b] containing any rounding perturbation
/// d = (r - x)/x of x, i.e. a = min/max of (lo-x)/x and (hi-x)/x. In the
/// normal range b - a <= 2u. Throws ZeroInputError at x = 0.
std::pair<double, double> delta_bounds(double x, const FloatFormat& fmt);

/// True iff x is a member of the format (finite, in range, on the grid).
bool is_representable(double x, const FloatFormat& fmt);

/// True iff x is nonzero with magnitude below the format's smallest normal.
bool is_subnormal(double x, const FloatFormat& fmt);

}  // namespace probsum
