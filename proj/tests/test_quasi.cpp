#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fracbd/errors.hpp"
#include "fracbd/quasi.hpp"
#include "fracbd/spectral.hpp"

using namespace fracbd;

namespace {

const RateSchedule kSub = RateSchedule::linear(0.5, 1.0);

Eigen::MatrixXd dense(const GeneratorMatrix& g) {
  const auto m = static_cast<Eigen::Index>(g.dim());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    q(i, i) = g.diag[i];
    if (i + 1 < m) {
      q(i, i + 1) = g.super[i];
      q(i + 1, i) = g.sub[i];
    }
  }
  return q;
}

double tv(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < std::max(a.size(), b.size()); ++k) {
    const double x = k < a.size() ? a[k] : 0.0;
    const double y = k < b.size() ? b[k] : 0.0;
    s += std::abs(x - y);
  }
  return 0.5 * s;
}

}  // namespace

TEST_CASE("quasi-limiting coefficients, indicator form") {
  const auto q1 = qld_coefficients(kSub, 1, 200);
  REQUIRE(q1.exists);
  CHECK(q1.coefficients[0] == 1.0);
  CHECK(q1.pmf_at(1) == doctest::Approx(1.0 / (2.0 * std::numbers::ln2)).epsilon(1e-10));
  double sum = 0.0;
  for (double p : q1.pmf) sum += p;
  CHECK(std::abs(sum - 1.0) <= 1e-12);
  CHECK(q1.tail_bound < 1e-50);

  const auto q2 = qld_coefficients(kSub, 2, 30);
  CHECK(q2.coefficients[0] == 1.0);
  CHECK(q2.coefficients[1] == doctest::Approx(0.75));
  CHECK(q2.pmf_at(0) == 0.0);
  CHECK(q2.pmf_at(31) == 0.0);

  const auto tab = qld_coefficients(RateSchedule::table({0, 2, 1, 0}, {0, 4, 3, 5}), 2, 3);
  CHECK(tab.coefficients[0] == doctest::Approx(0.25));

  CHECK_THROWS_AS(qld_coefficients(kSub, 0, 10), DomainError);
  CHECK_THROWS_AS(qld_coefficients(kSub, 5, 4), DomainError);
}

TEST_CASE("no quasi-limiting distribution when B diverges") {
  for (double lam : {1.0, 2.0}) {
    const auto q = qld_coefficients(RateSchedule::linear(lam, 1.0), 1, 50);
    CHECK_FALSE(q.exists);
    CHECK(q.pmf.empty());
    CHECK_FALSE(q.diagnostic.empty());
  }
}

TEST_CASE("indicator coefficients equal the Green function") {
  const auto g = build_generator(kSub, 200, Boundary::reflect);
  const auto green = green_function(g);
  double worst = 0.0;
  for (std::size_t i0 : {1u, 2u, 5u}) {
    const auto q = qld_coefficients(kSub, i0, 30);
    for (std::size_t n = 1; n <= 30; ++n)
      worst = std::max(worst, std::abs(green(i0, n) - q.coefficients[n - 1]));
  }
  CHECK(worst <= 1e-6);
  // The alternative convention min{i, n-1} does not match.
  const auto pi = pi_weights(kSub, 3);
  const double alt = pi(3) * (1.0 + 1.0 / (kSub.birth(1) * pi(1)) + 1.0 / (kSub.birth(2) * pi(2)));
  CHECK(std::abs(alt - green(2, 3)) > 0.1);
}

TEST_CASE("Green function against a dense inverse") {
  const auto g = build_generator(kSub, 40, Boundary::reflect);
  const Eigen::MatrixXd inv = (-dense(g)).inverse();
  const auto green = green_function(g);
  for (std::size_t i = 1; i <= 40; ++i)
    for (std::size_t j = 1; j <= 40; ++j)
      CHECK(green(i, j) == doctest::Approx(inv(i - 1, j - 1)).epsilon(1e-10));
}

TEST_CASE("C integrals") {
  const auto dec = decompose(kSub, 200);
  const auto g = green_function(build_generator(kSub, 200));
  for (std::size_t i : {1u, 3u, 7u}) {
    const auto cii = c_integrals(dec, i, i);
    CHECK(cii[0] * dec.pi()(i) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(c_integrals(dec, i, i + 2)[0]) < 1e-8);
  }
  // mu_1 C_{1,1,2} = int_0^inf P_1[T > t] dt = sum_j G(1, j)
  double row = 0.0;
  for (std::size_t j = 1; j <= 200; ++j) row += g(1, j);
  CHECK(dec.mu1() * c_integrals(dec, 1, 1)[2] == doctest::Approx(row).epsilon(1e-9));
  // Cauchy-Schwarz bound
  const double th1 = dec.thetas().front();
  for (std::size_t j : {1u, 2u, 5u, 20u}) {
    const auto c = c_integrals(dec, 2, j);
    const double cs = std::sqrt(c_integrals(dec, 2, 2)[0] * c_integrals(dec, j, j)[0]);
    for (std::size_t k = 0; k <= 4; ++k) CHECK(std::abs(c[k]) <= std::pow(th1, -double(k)) * cs * (1 + 1e-9));
  }
  CHECK_THROWS_AS(c_integrals(dec, 1, 1, 5), DomainError);
  CHECK_THROWS_AS(c_integrals(dec, 1, 201), DomainError);
}

TEST_CASE("limit value matches the coefficient pmf") {
  const auto dec = decompose(kSub, 200);
  for (std::size_t i0 : {1u, 3u}) {
    const auto q = qld_coefficients(kSub, i0, 200);
    for (std::size_t j = 1; j <= 10; ++j)
      CHECK(qld_limit_value(dec, i0, j) == doctest::Approx(q.pmf_at(j)).epsilon(1e-10));
  }
}

TEST_CASE("conditional law approaches the fractional limit") {
  const auto dec = decompose(kSub, 200);
  const auto ratio = qld_limit_check(dec, FracOrder(0.6), 1, 1, {10.0, 100.0, 1e4});
  const double target = 1.0 / (2.0 * std::numbers::ln2);
  CHECK(std::abs(ratio.back() - target) <= 1e-2);
  CHECK(std::abs(ratio[2] - target) < std::abs(ratio[0] - target));

  // Classical limit: the principal eigenvector, which differs.
  const auto classical = qld_limit_check(dec, FracOrder(1.0), 1, 1, {200.0});
  const auto nu = qsd_principal(dec);
  CHECK(classical[0] == doctest::Approx(nu.nu[0]).epsilon(1e-6));
  CHECK(std::abs(classical[0] - target) >= 0.05);

  const auto far = qld_limit_check(dec, FracOrder(0.6), 1, 150, {1e4});
  CHECK(far[0] <= 1e-6);
  CHECK_THROWS_AS(qld_limit_check(dec, FracOrder(0.6), 1, 201, {1.0}), DomainError);
}

TEST_CASE("rate constant") {
  const auto dec = decompose(kSub, 200);
  CHECK_THROWS_AS(rate_constant(dec, FracOrder(1.0), 1, 1), DomainError);
  // A fit of t^a (ratio - limit) = K + b t^-a over a short grid.
  for (double a : {0.6, 0.5}) {
    const double k = rate_constant(dec, FracOrder(a), 1, 1);
    const double limit = qld_limit_value(dec, 1, 1);
    std::vector<double> ts;
    for (int q = 0; q <= 8; ++q) ts.push_back(std::pow(10.0, 3.0 + 0.25 * q));
    const auto r = qld_limit_check(dec, FracOrder(a), 1, 1, ts);
    const double scale = a == 0.5 ? 1.0 : a;  // exponent of t in the correction
    Eigen::MatrixXd x(ts.size(), 2);
    Eigen::VectorXd y(ts.size());
    for (std::size_t q = 0; q < ts.size(); ++q) {
      const double tp = std::pow(ts[q], scale);
      x(q, 0) = 1.0;
      x(q, 1) = a == 0.5 ? 1.0 / ts[q] : 1.0 / std::pow(ts[q], a);
      y(q) = tp * (r[q] - limit);
    }
    const Eigen::VectorXd beta = x.colPivHouseholderQr().solve(y);
    CAPTURE(a);
    CHECK(std::abs(beta(0) / k - 1.0) <= 0.05);
  }
}

TEST_CASE("principal quasi-stationary vector") {
  const auto dec = decompose(kSub, 200);
  const auto nu = qsd_principal(dec);
  REQUIRE(nu.outcome == QsdOutcome::proper);
  CHECK(nu.theta == doctest::Approx(dec.mu1() * nu.nu[0]).epsilon(1e-12));
  CHECK(nu.theta == doctest::Approx(0.5).epsilon(1e-8));
  double s = 0.0;
  for (double v : nu.nu) {
    CHECK(v >= -1e-15);
    s += v;
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

  const auto solved = qsd_solve(kSub, nu.theta, 60);
  REQUIRE(solved.outcome == QsdOutcome::proper);
  CHECK(solved.residual <= 1e-8);
  for (std::size_t j = 0; j < 20; ++j)
    CHECK(solved.nu[j] == doctest::Approx(nu.nu[j]).epsilon(1e-6));
}

TEST_CASE("qsd recursion over a theta scan") {
  CHECK(qsd_solve(kSub, 0.0, 50).outcome == QsdOutcome::zero_mass);
  for (double th : {0.2, 0.4, 0.5}) {
    const auto r = qsd_solve(kSub, th, 400);
    CAPTURE(th);
    REQUIRE(r.outcome == QsdOutcome::proper);
    CHECK(r.nu[0] * kSub.death(1) == doctest::Approx(th).epsilon(1e-12));
    CHECK(std::abs(r.raw_mass + r.tail_mass - 1.0) <= 0.1);
    for (double v : r.nu) REQUIRE(v >= 0.0);
  }
  for (double th : {0.55, 0.7, 1.2}) {
    CAPTURE(th);
    CHECK(qsd_solve(kSub, th, 400).outcome == QsdOutcome::negative_entry);
  }
  CHECK_THROWS_AS(qsd_solve(kSub, -1.0, 10), DomainError);
  CHECK_THROWS_AS(qsd_solve(kSub, 0.3, 1), DomainError);
}

TEST_CASE("qsd classification") {
  const auto sub = qsd_classify(kSub);
  CHECK(sub.kind == QsdClass::family);
  CHECK(sub.d_status == SeriesStatus::diverged);
  CHECK(sub.theta_star == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(qsd_classify(RateSchedule::linear(1.0, 1.0)).kind == QsdClass::none);

  std::vector<double> b(51), d(51);
  for (std::size_t i = 1; i <= 50; ++i) {
    b[i] = i < 50 ? double(i) : 0.0;
    d[i] = double(i * i);
  }
  CHECK(qsd_classify(RateSchedule::table(b, d)).kind == QsdClass::unique);
  b[50] = 50.0;
  CHECK(qsd_classify(RateSchedule::table(b, d)).kind == QsdClass::undecided);
}

TEST_CASE("stationarity of the quasi-stationary vector for every order") {
  const auto dec = decompose(kSub, 60);
  const auto nu = qsd_principal(dec);
  std::vector<double> ts;
  for (int k = 1; k <= 6; ++k) ts.push_back(0.5 * k * k);
  CHECK(qsd_stationarity_check(dec, FracOrder(1.0), nu.nu, nu.theta, ts) <= 1e-8);
  for (double a : {0.5, 0.7}) CHECK(qsd_stationarity_check(dec, FracOrder(a), nu.nu, nu.theta, ts) <= 1e-6);
  auto bent = nu.nu;
  bent[0] += 0.05;
  bent[1] -= 0.05;
  CHECK(qsd_stationarity_check(dec, FracOrder(0.7), bent, nu.theta, ts) > 1e-3);
  CHECK_THROWS_AS(qsd_stationarity_check(dec, FracOrder(0.7), {0.5, 0.5}, 0.5, ts), DomainError);
}

TEST_CASE("quasi-limiting and quasi-stationary laws differ") {
  const auto q = qld_coefficients(kSub, 1, 200);
  const auto nu = qsd_principal(decompose(kSub, 200));
  CHECK(tv(q.pmf, nu.nu) >= 0.01);
}
