#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "probsum/fpemu.hpp"
#include "probsum/rng.hpp"

using namespace probsum;

namespace {

// Random value in the normal range of fmt, uniform over exponent and
// significand, with random sign. Exponents stop one binade short of the top
// so the whole binade is in range.
double random_normal_range(std::mt19937_64& rng, const FloatFormat& fmt) {
  std::uniform_int_distribution<int> exp_dist(fmt.min_exponent(), fmt.max_exponent() - 1);
  const double frac = uniform01(rng);
  const double x = std::ldexp(1.0 + frac, exp_dist(rng));
  return (rng() & 1) ? x : -x;
}

FloatFormat random_format(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> p_dist(2, 24);
  std::uniform_int_distribution<int> e_dist(2, 11);
  return FloatFormat(p_dist(rng), e_dist(rng));
}

}  // namespace

TEST_CASE("format presets and derived constants") {
  const FloatFormat fp16 = FloatFormat::fp16();
  CHECK(fp16.precision() == 11);
  CHECK(fp16.exponent_bits() == 5);
  CHECK(fp16.unit_roundoff() == std::ldexp(1.0, -11));
  CHECK(fp16.unit_roundoff() == doctest::Approx(4.88e-4).epsilon(0.01));
  CHECK(fp16.min_exponent() == -14);
  CHECK(fp16.max_exponent() == 15);
  CHECK(fp16.max_finite() == 65504.0);
  CHECK(fp16.min_normal() == std::ldexp(1.0, -14));
  CHECK(fp16.min_subnormal() == std::ldexp(1.0, -24));

  const FloatFormat bf16 = FloatFormat::bf16();
  CHECK(bf16.precision() == 8);
  CHECK(bf16.exponent_bits() == 8);
  CHECK(bf16.unit_roundoff() == std::ldexp(1.0, -8));
  CHECK(bf16.unit_roundoff() == doctest::Approx(3.9e-3).epsilon(0.01));
  CHECK(bf16.min_exponent() == -126);
  CHECK(bf16.max_exponent() == 127);
}

TEST_CASE("format validation") {
  CHECK_THROWS_AS(FloatFormat(1, 5), DomainError);
  CHECK_THROWS_AS(FloatFormat(11, 1), DomainError);
  CHECK_THROWS_AS(FloatFormat(11, 12), DomainError);
  CHECK_THROWS_AS(FloatFormat(50, 8), DomainError);
  CHECK_NOTHROW(FloatFormat(42, 11));
}

TEST_CASE("neighbors of representable values") {
  const FloatFormat bf16 = FloatFormat::bf16();
  const NeighborPair nb = neighbors(1.0, bf16);
  CHECK(nb.lo == 1.0);
  CHECK(nb.hi == 1.0);
  CHECK(neighbors(0.0, bf16).lo == 0.0);
  CHECK(neighbors(0.0, bf16).hi == 0.0);
}

TEST_CASE("neighbors around 1 match enumeration of the bf16 grid") {
  // bf16 has p = 8, so the grid in [1, 2) is 1 + k * 2^-7 and the spacing
  // above 1.0 is 2u = 2^-7.
  const FloatFormat bf16 = FloatFormat::bf16();
  const double spacing = std::ldexp(1.0, -7);
  std::vector<double> grid;
  for (int k = 0; k <= 128; ++k) grid.push_back(1.0 + k * spacing);
  for (double g : grid) CHECK(is_representable(g, bf16));

  const double x = 1.0 + std::ldexp(1.0, -9);  // strictly inside (1, 1 + 2^-7)
  const NeighborPair nb = neighbors(x, bf16);
  CHECK(nb.lo == 1.0);
  CHECK(nb.hi == 1.0 + spacing);

  // Nothing representable strictly between consecutive grid points.
  const double probe = 1.0 + 0.5 * spacing;
  CHECK_FALSE(is_representable(probe, bf16));
  CHECK(neighbors(probe, bf16).lo == 1.0);
  CHECK(neighbors(probe, bf16).hi == 1.0 + spacing);
}

TEST_CASE("neighbors sign symmetry and sandwich property") {
  std::mt19937_64 rng(2024);
  for (const FloatFormat& fmt : {FloatFormat::fp16(), FloatFormat::bf16()}) {
    for (int i = 0; i < 20000; ++i) {
      const double x = random_normal_range(rng, fmt);
      const NeighborPair nb = neighbors(x, fmt);
      CHECK(nb.lo <= x);
      CHECK(nb.hi >= x);
      CHECK(is_representable(nb.lo, fmt));
      CHECK(is_representable(nb.hi, fmt));
      const NeighborPair mirrored = neighbors(-x, fmt);
      CHECK(mirrored.lo == -nb.hi);
      CHECK(mirrored.hi == -nb.lo);
      if (is_representable(x, fmt)) {
        CHECK(nb.lo == nb.hi);
      } else {
        CHECK(nb.lo < nb.hi);
      }
    }
  }
}

TEST_CASE("round_nearest ties resolve to the even significand") {
  const FloatFormat bf16 = FloatFormat::bf16();
  CHECK(round_nearest(1.0, FloatFormat::fp16()) == 1.0);
  // 1 + 2^-8 is the exact midpoint of [1, 1 + 2^-7]; 1.0 has the even
  // significand.
  CHECK(round_nearest(1.0 + std::ldexp(1.0, -8), bf16) == 1.0);
  // 1 + 3*2^-8 is the midpoint of [1 + 2^-7, 1 + 2^-6]; the upper one is even.
  CHECK(round_nearest(1.0 + 3.0 * std::ldexp(1.0, -8), bf16) == 1.0 + std::ldexp(1.0, -6));
  // Below the midpoint rounds down.
  CHECK(round_nearest(1.0 + std::ldexp(1.0, -9), bf16) == 1.0);
}

TEST_CASE("round_nearest odd symmetry and |delta| <= u on the normal range") {
  std::mt19937_64 rng(7);
  for (const FloatFormat& fmt :
       {FloatFormat::fp16(), FloatFormat::bf16(), FloatFormat(17, 6)}) {
    const double u = fmt.unit_roundoff();
    for (int i = 0; i < 30000; ++i) {
      const double x = random_normal_range(rng, fmt);
      const double r = round_nearest(x, fmt);
      CHECK(round_nearest(-x, fmt) == -r);
      CHECK(std::abs((r - x) / x) <= u);
      const NeighborPair nb = neighbors(x, fmt);
      CHECK((r == nb.lo || r == nb.hi));
      // Round-trip: the result is a fixed point of the format.
      CHECK(neighbors(r, fmt).lo == r);
      CHECK(neighbors(r, fmt).hi == r);
    }
  }
}

TEST_CASE("round_stochastic on representable input consumes no randomness") {
  const FloatFormat bf16 = FloatFormat::bf16();
  std::mt19937_64 rng(99), untouched(99);
  for (int i = 0; i < 100; ++i) CHECK(round_stochastic(1.0, bf16, rng) == 1.0);
  CHECK(rng() == untouched());
}

TEST_CASE("round_stochastic picks each neighbor with probability 1/2 at a midpoint") {
  const FloatFormat bf16 = FloatFormat::bf16();
  const double x = 1.0 + std::ldexp(1.0, -8);  // midpoint, p = 1/2
  std::mt19937_64 rng(11);
  const int n = 100000;
  int ups = 0;
  for (int i = 0; i < n; ++i) {
    const double r = round_stochastic(x, bf16, rng);
    const bool up = r == 1.0 + std::ldexp(1.0, -7);
    if (up) ++ups;
    CHECK((up || r == 1.0));
  }
  const double sigma = std::sqrt(0.25 * n);
  CHECK(std::abs(ups - n / 2.0) <= 4.0 * sigma);
}

TEST_CASE("round_stochastic is unbiased: sample mean within 4 standard errors") {
  const FloatFormat bf16 = FloatFormat::bf16();
  const double x = 1.0 + std::ldexp(1.0, -10);
  const NeighborPair nb = neighbors(x, bf16);
  const double p = (x - nb.lo) / (nb.hi - nb.lo);
  CHECK(p == doctest::Approx(0.125));
  std::mt19937_64 rng(5150);
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += round_stochastic(x, bf16, rng);
  const double mean = sum / n;
  const double se = (nb.hi - nb.lo) * std::sqrt(p * (1.0 - p) / n);
  CHECK(std::abs(mean - x) <= 4.0 * se);
}

TEST_CASE("stochastic delta lies in the predictable interval of width <= 2u") {
  std::mt19937_64 rng(31337);
  for (const FloatFormat& fmt : {FloatFormat::fp16(), FloatFormat::bf16()}) {
    const double u = fmt.unit_roundoff();
    for (int i = 0; i < 30000; ++i) {
      const double x = random_normal_range(rng, fmt);
      const auto [a, b] = delta_bounds(x, fmt);
      CHECK(b - a <= 2.0 * u);
      CHECK(a <= 0.0);
      CHECK(b >= 0.0);
      const double r = round_stochastic(x, fmt, rng);
      const double d = (r - x) / x;
      CHECK(d >= a);
      CHECK(d <= b);
      CHECK(std::abs(d) <= 2.0 * u);
    }
  }
}

TEST_CASE("delta_bounds examples and symmetry") {
  const FloatFormat bf16 = FloatFormat::bf16();
  const auto [a0, b0] = delta_bounds(1.0, bf16);
  CHECK(a0 == 0.0);
  CHECK(b0 == 0.0);

  const double x = 1.0 + std::ldexp(1.0, -9);
  const auto [a, b] = delta_bounds(x, bf16);
  CHECK(b - a == doctest::Approx(std::ldexp(1.0, -7) / x).epsilon(1e-15));
  CHECK(b - a <= 2.0 * bf16.unit_roundoff());

  // delta = (r - x)/x is invariant under x -> -x, so the interval is too.
  const auto [an, bn] = delta_bounds(-x, bf16);
  CHECK(an == a);
  CHECK(bn == b);

  CHECK_THROWS_AS(delta_bounds(0.0, bf16), ZeroInputError);
}

TEST_CASE("idempotence of both rounding modes on representable values") {
  std::mt19937_64 rng(808);
  for (int i = 0; i < 5000; ++i) {
    const FloatFormat fmt = random_format(rng);
    const double x = round_nearest(random_normal_range(rng, fmt), fmt);
    CHECK(round_nearest(x, fmt) == x);
    std::mt19937_64 sr(static_cast<std::uint64_t>(i));
    CHECK(round_stochastic(x, fmt, sr) == x);
  }
}

TEST_CASE("overflow raises a hard error") {
  const FloatFormat fp16 = FloatFormat::fp16();
  CHECK_THROWS_AS(neighbors(65505.0, fp16), OverflowError);
  CHECK_THROWS_AS(round_nearest(1.0e5, fp16), OverflowError);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(round_stochastic(-65600.0, fp16, rng), OverflowError);
  // Exactly the largest finite value is fine.
  CHECK(round_nearest(65504.0, fp16) == 65504.0);
  CHECK_THROWS_AS(round_nearest(std::numeric_limits<double>::infinity(), fp16), DomainError);
}

TEST_CASE("subnormal handling and flush-to-zero variant") {
  const FloatFormat fp16 = FloatFormat::fp16();
  const double tiny = fp16.min_subnormal();
  CHECK(is_representable(tiny, fp16));
  CHECK(is_subnormal(tiny, fp16));
  CHECK_FALSE(is_subnormal(fp16.min_normal(), fp16));
  CHECK(round_nearest(tiny, fp16) == tiny);
  // Exactly half the smallest subnormal: tie between 0 (even) and tiny.
  CHECK(round_nearest(tiny / 2.0, fp16) == 0.0);

  const FloatFormat flush(11, 5, false);
  const double x = fp16.min_normal() / 2.0;
  const NeighborPair nb = neighbors(x, flush);
  CHECK(nb.lo == 0.0);
  CHECK(nb.hi == flush.min_normal());
  CHECK_FALSE(is_representable(tiny, flush));
  CHECK(is_representable(flush.min_normal(), flush));
}

TEST_CASE("negative zero is treated as zero") {
  const FloatFormat bf16 = FloatFormat::bf16();
  CHECK(round_nearest(-0.0, bf16) == 0.0);
  CHECK(is_representable(-0.0, bf16));
  std::mt19937_64 rng(3);
  CHECK(round_stochastic(-0.0, bf16, rng) == 0.0);
}
