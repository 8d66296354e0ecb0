#include <doctest.h>

#include <cmath>

#include "oracle/frozen.hpp"
#include "oracle/ml_series_oracle.hpp"

namespace fo = fracbd::oracle;

TEST_CASE("frozen half-order values reproduce from both oracle forms") {
  for (const auto& p : fracbd::frozen::kHalf) {
    CAPTURE(p.x);
    const double series = fo::ml_half_series(-p.x);
    const double closed = fo::scaled_erfc(p.x);
    CHECK(series == doctest::Approx(p.value).epsilon(1e-15));
    CHECK(closed == doctest::Approx(p.value).epsilon(1e-15));
  }
}

TEST_CASE("frozen general-order values reproduce") {
  for (const auto& p : fracbd::frozen::kGeneral) {
    CAPTURE(p.num);
    CAPTURE(p.x);
    CHECK(fo::ml_series(p.num, p.den, p.x, 3000) ==
          doctest::Approx(p.value).epsilon(1e-15));
  }
}

TEST_CASE("general oracle at 1/2 agrees with the half-order oracle") {
  for (double x : {0.3, 4.0, 15.0}) {
    CHECK(fo::ml_series(1, 2, -x) ==
          doctest::Approx(fo::ml_half_series(-x)).epsilon(1e-15));
  }
}

TEST_CASE("oracle at order one is the exponential") {
  for (double x : {-0.5, -3.0, -25.0}) {
    CHECK(fo::ml_series(1, 1, x, 400) ==
          doctest::Approx(std::exp(x)).epsilon(1e-15));
  }
}
