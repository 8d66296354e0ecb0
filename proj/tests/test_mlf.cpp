#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fracbd/errors.hpp"
#include "fracbd/mlf.hpp"
#include "oracle/frozen.hpp"

using namespace fracbd;

TEST_CASE("FracOrder validation") {
  CHECK_THROWS_AS(FracOrder(0.0), DomainError);
  CHECK_THROWS_AS(FracOrder(-0.3), DomainError);
  CHECK_THROWS_AS(FracOrder(1.0001), DomainError);
  CHECK_THROWS_AS(FracOrder(std::nan("")), DomainError);
  CHECK(FracOrder(1.0).is_classical());
  CHECK_FALSE(FracOrder(0.999).is_classical());
}

TEST_CASE("reciprocal gamma") {
  CHECK(reciprocal_gamma(0.0) == 0.0);
  CHECK(reciprocal_gamma(-1.0) == 0.0);
  CHECK(reciprocal_gamma(-7.0) == 0.0);
  CHECK(reciprocal_gamma(0.5) == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)));
  CHECK(reciprocal_gamma(-0.5) ==
        doctest::Approx(-1.0 / (2.0 * std::sqrt(std::numbers::pi))));
  CHECK(reciprocal_gamma(5.0) == doctest::Approx(1.0 / 24.0));
}

TEST_CASE("ml_eval basic values") {
  CHECK(ml_eval(FracOrder(1.0), -1.0) == std::exp(-1.0));
  CHECK(ml_eval(FracOrder(1.0), -1.0) == doctest::Approx(0.3678794411714423).epsilon(1e-15));
  CHECK(ml_eval(FracOrder(0.5), 0.0) == 1.0);
  CHECK(ml_eval(FracOrder(0.5), -1.0) ==
        doctest::Approx(0.427583576155807).epsilon(1e-13));
}

TEST_CASE("half order against the frozen extended-precision oracle") {
  for (const auto& p : frozen::kHalf) {
    CAPTURE(p.x);
    const double got = ml_eval(FracOrder(0.5), -p.x);
    CHECK(std::abs(got - p.value) <= 1e-10 * p.value);
  }
}

TEST_CASE("general orders against the frozen oracle") {
  for (const auto& p : frozen::kGeneral) {
    CAPTURE(p.num);
    CAPTURE(p.x);
    const double a = static_cast<double>(p.num) / p.den;
    const double got = ml_eval(FracOrder(a), p.x);
    CHECK(std::abs(got - p.value) <= 1e-10 * p.value);
  }
}

TEST_CASE("positive axis") {
  CHECK(ml_eval(FracOrder(1.0), 2.0) == doctest::Approx(std::exp(2.0)));
  // E_{1/2}(x) = e^{x^2} erfc(-x)
  const double x = 1.5;
  CHECK(ml_eval(FracOrder(0.5), x) ==
        doctest::Approx(std::exp(x * x) * std::erfc(-x)).epsilon(1e-10));
  CHECK_THROWS_AS(ml_eval(FracOrder(0.5), 100.0), UnsupportedDomain);
}

TEST_CASE("complete monotonicity on the negative axis") {
  std::vector<double> grid;
  for (double x = 0.0; x <= 1e6; x = x < 1 ? x + 0.125 : x * 1.3) grid.push_back(-x);
  for (double a : {0.3, 0.5, 0.7, 0.9, 1.0}) {
    CAPTURE(a);
    std::vector<double> v;
    for (double x : grid) v.push_back(ml_eval(FracOrder(a), x));
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (a < 1.0) REQUIRE(v[k] > 0.0);
      REQUIRE(v[k] >= 0.0);
      REQUIRE(v[k] <= 1.0);
      if (k > 0) REQUIRE(v[k] <= v[k - 1]);
    }
    // second divided differences on a nonuniform grid are >= 0 (convexity)
    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
      const double h0 = grid[k - 1] - grid[k];
      const double h1 = grid[k] - grid[k + 1];
      const double d0 = (v[k - 1] - v[k]) / h0;
      const double d1 = (v[k] - v[k + 1]) / h1;
      REQUIRE(d0 - d1 >= -1e-12);
    }
  }
}

TEST_CASE("ml_survival") {
  CHECK(ml_survival(FracOrder(1.0), 2.0, 1.0) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  for (double a : {0.2, 0.6, 1.0}) CHECK(ml_survival(FracOrder(a), 3.0, 0.0) == 1.0);
  CHECK(ml_survival(FracOrder(0.5), 1.0, 4.0) ==
        doctest::Approx(0.25539567631050575).epsilon(1e-10));
  CHECK_THROWS_AS(ml_survival(FracOrder(0.5), 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(ml_survival(FracOrder(0.5), 1.0, -1.0), DomainError);
}

TEST_CASE("power-law tail at large t") {
  for (double a : {0.5, 0.7}) {
    const double t = 1e8;
    const double scaled = std::pow(t, a) * ml_survival(FracOrder(a), 1.0, t) *
                          std::tgamma(1.0 - a);
    CHECK(std::abs(scaled - 1.0) <= 1e-2);
  }
}

TEST_CASE("tail expansion") {
  const double t = 1e6;
  const double half = ml_tail_expansion(FracOrder(0.5), 1.0, t, 2);
  CHECK(half == doctest::Approx(1.0 / (std::sqrt(std::numbers::pi) * std::sqrt(t))));
  const double one = ml_tail_expansion(FracOrder(0.7), 1.0, t, 1);
  CHECK(one == doctest::Approx(1.0 / (std::pow(t, 0.7) * std::tgamma(0.3))));
  const double three = ml_tail_expansion(FracOrder(0.7), 2.0, 1e4, 3);
  const double ref = ml_survival(FracOrder(0.7), 2.0, 1e4);
  CHECK(std::abs(three - ref) <= 1e-6 * ref);
  CHECK_THROWS_AS(ml_tail_expansion(FracOrder(0.7), 1.0, 2.0, 3), AccuracyError);
  CHECK_THROWS_AS(ml_tail_expansion(FracOrder(0.7), 1.0, 1e6, 0), DomainError);
}

TEST_CASE("Laplace transform residual") {
  const auto exp_case = ml_laplace_residual(FracOrder(1.0), 1.0, 1.0);
  CHECK(exp_case.converged);
  CHECK(exp_case.exact == doctest::Approx(0.5));
  CHECK(exp_case.residual <= 1e-10);
  for (double a : {0.5, 0.7, 0.9})
    for (double th : {0.5, 1.0, 3.0})
      for (double s : {0.5, 1.0, 2.0}) {
        CAPTURE(a);
        CAPTURE(th);
        CAPTURE(s);
        const auto r = ml_laplace_residual(FracOrder(a), th, s);
        CHECK(r.converged);
        CHECK(r.residual <= 1e-6);
      }
}

TEST_CASE("config validation") {
  MlEvalConfig cfg;
  cfg.series_threshold = 50.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  MlEvalConfig custom;
  custom.asym_threshold = 80.0;
  CHECK(ml_eval(FracOrder(0.7), -60.0, custom) ==
        doctest::Approx(ml_eval(FracOrder(0.7), -60.0)).epsilon(1e-10));
}
