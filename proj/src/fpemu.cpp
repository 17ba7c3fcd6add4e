#include "probsum/fpemu.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "probsum/rng.hpp"

namespace probsum {

FloatFormat::FloatFormat(int precision, int exponent_bits, bool subnormals_enabled)
    : precision_(precision), exponent_bits_(exponent_bits), subnormals_(subnormals_enabled) {
  if (precision < 2)
    throw DomainError("FloatFormat: precision must be at least 2");
  if (exponent_bits < 2 || exponent_bits > 11)
    throw DomainError("FloatFormat: exponent_bits must be in [2, 11]");
  if (precision + exponent_bits > 53)
    throw DomainError("FloatFormat: precision + exponent_bits must be at most 53");
}

double FloatFormat::unit_roundoff() const { return std::ldexp(1.0, -precision_); }

int FloatFormat::min_exponent() const { return 2 - (1 << (exponent_bits_ - 1)); }

int FloatFormat::max_exponent() const { return (1 << (exponent_bits_ - 1)) - 1; }

double FloatFormat::min_normal() const { return std::ldexp(1.0, min_exponent()); }

double FloatFormat::min_subnormal() const {
  return std::ldexp(1.0, min_exponent() - precision_ + 1);
}

double FloatFormat::max_finite() const {
  return std::ldexp(2.0 - std::ldexp(1.0, 1 - precision_), max_exponent());
}

namespace {

// Enclosing grid points of a positive in-range x. The grid spacing around x
// is 2^qexp; `m_lo` is lo/2^qexp, an integer below 2^p whose parity decides
// nearest-even ties (at an upward binade crossing hi/2^qexp = 2^p, also even,
// consistent with the format's own significand parity).
struct Grid {
  double lo;
  double hi;
  double m_lo;
};

Grid enclose_positive(double x, const FloatFormat& fmt) {
  int bexp = 0;
  std::frexp(x, &bexp);
  const int binade = bexp - 1;  // x in [2^binade, 2^(binade+1))
  if (binade < fmt.min_exponent() && !fmt.subnormals_enabled()) {
    // No representable values strictly between 0 and the smallest normal.
    return {0.0, fmt.min_normal(), 0.0};
  }
  const int qexp = std::max(binade, fmt.min_exponent()) - (fmt.precision() - 1);
  // Power-of-two scaling is exact; scaled < 2^p <= 2^51, so floor is exact too.
  const double scaled = std::ldexp(x, -qexp);
  const double m = std::floor(scaled);
  if (m == scaled) return {x, x, m};
  return {std::ldexp(m, qexp), std::ldexp(m + 1.0, qexp), m};
}

void check_input(double x, const FloatFormat& fmt, const char* op) {
  if (!std::isfinite(x)) throw DomainError(std::string(op) + ": input must be finite");
  if (std::abs(x) > fmt.max_finite())
    throw OverflowError(x, std::string(op) + ": |x| exceeds the largest finite value of the format");
}

}  // namespace

NeighborPair neighbors(double x, const FloatFormat& fmt) {
  check_input(x, fmt, "neighbors");
  if (x == 0.0) return {x, x};
  if (x < 0.0) {
    const Grid g = enclose_positive(-x, fmt);
    return {-g.hi, -g.lo};
  }
  const Grid g = enclose_positive(x, fmt);
  return {g.lo, g.hi};
}

double round_nearest(double x, const FloatFormat& fmt) {
  check_input(x, fmt, "round_nearest");
  if (x == 0.0) return x;
  if (x < 0.0) return -round_nearest(-x, fmt);
  const Grid g = enclose_positive(x, fmt);
  if (g.lo == g.hi) return x;
  // lo <= x <= hi <= 2*lo (or lo == 0), so both differences are exact and
  // the tie comparison is decided without rounding.
  const double down = x - g.lo;
  const double up = g.hi - x;
  if (down < up) return g.lo;
  if (up < down) return g.hi;
  const bool lo_even = static_cast<std::int64_t>(g.m_lo) % 2 == 0;
  return lo_even ? g.lo : g.hi;
}

double round_stochastic(double x, const FloatFormat& fmt, std::mt19937_64& rng) {
  check_input(x, fmt, "round_stochastic");
  if (x == 0.0) return x;
  const NeighborPair nb = neighbors(x, fmt);
  if (nb.lo == nb.hi) return x;  // representable: consume no randomness
  const double p = (x - nb.lo) / (nb.hi - nb.lo);
  return uniform01(rng) < p ? nb.hi : nb.lo;
}

std::pair<double, double> delta_bounds(double x, const FloatFormat& fmt) {
  if (!std::isfinite(x)) throw DomainError("delta_bounds: input must be finite");
  if (x == 0.0)
    throw ZeroInputError("delta_bounds: relative perturbation undefined at zero");
  const NeighborPair nb = neighbors(x, fmt);
  const double d1 = (nb.lo - x) / x;
  const double d2 = (nb.hi - x) / x;
  return std::minmax(d1, d2);
}

bool is_representable(double x, const FloatFormat& fmt) {
  if (!std::isfinite(x)) return false;
  if (x == 0.0) return true;
  if (std::abs(x) > fmt.max_finite()) return false;
  const Grid g = enclose_positive(std::abs(x), fmt);
  return g.lo == g.hi;
}

bool is_subnormal(double x, const FloatFormat& fmt) {
  return x != 0.0 && std::abs(x) < fmt.min_normal();
}

}  // namespace probsum
