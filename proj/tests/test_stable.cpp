#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fracbd/errors.hpp"
#include "fracbd/mlf.hpp"
#include "fracbd/rng.hpp"
#include "fracbd/stable.hpp"

using namespace fracbd;

namespace {

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

template <class F>
Moments mc_mean(std::size_t n, F&& draw) {
  double sum = 0.0;
  double sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = draw();
    sum += v;
    sq += v * v;
  }
  const double m = sum / n;
  const double var = std::max(0.0, sq / n - m * m);
  return {m, std::sqrt(var / n)};
}

double binomial_se(double p, std::size_t n) { return std::sqrt(p * (1 - p) / n); }

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_CASE("rng streams are reproducible and distinct") {
  RngStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  bool differs_c = false, differs_d = false;
  for (int k = 0; k < 100; ++k) {
    const auto x = a.next_u64();
    REQUIRE(x == b.next_u64());
    differs_c |= x != c.next_u64();
    differs_d |= x != d.next_u64();
  }
  CHECK(differs_c);
  CHECK(differs_d);
  RngStream u(1, 0);
  for (int k = 0; k < 10000; ++k) {
    const double v = u.uniform();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
    REQUIRE(u.exponential() > 0.0);
  }
}

TEST_CASE("sample_stable at order one is the point mass") {
  RngStream rng(5, 0);
  for (int k = 0; k < 10; ++k) CHECK(sample_stable(FracOrder(1.0), rng) == 1.0);
}

TEST_CASE("sample_stable median at order one half") {
  // P[S <= x] = erfc(1 / (2 sqrt x)); the median solves erfc(.) = 1/2.
  double lo = 0.1, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (std::erfc(1.0 / (2.0 * std::sqrt(mid))) < 0.5 ? lo : hi) = mid;
  }
  const double median = 0.5 * (lo + hi);
  CHECK(median == doctest::Approx(1.0991).epsilon(1e-4));

  RngStream rng(2024, 0);
  const std::size_t n = 1'000'000;
  std::size_t below = 0;
  for (std::size_t k = 0; k < n; ++k) below += sample_stable(FracOrder(0.5), rng) <= median;
  CHECK(std::abs(double(below) / n - 0.5) <= 3 * binomial_se(0.5, n));
}

TEST_CASE("Laplace transform of the stable sampler") {
  std::uint64_t stream = 0;
  for (double a : {0.5, 0.7, 0.9}) {
    for (double s : {0.5, 1.0, 2.0}) {
      CAPTURE(a);
      CAPTURE(s);
      RngStream rng(77, stream++);
      const auto m = mc_mean(1'000'000, [&] {
        return std::exp(-s * sample_stable(FracOrder(a), rng));
      });
      CHECK(std::abs(m.mean - std::exp(-std::pow(s, a))) <= 3 * m.se);
    }
  }
}

TEST_CASE("inverse subordinator marginal") {
  RngStream rng(9, 0);
  CHECK(sample_inverse_at(FracOrder(0.4), 0.0, rng) == 0.0);
  CHECK(sample_inverse_at(FracOrder(1.0), 3.5, rng) == 3.5);
  const auto m = mc_mean(1'000'000, [&] {
    return std::exp(-sample_inverse_at(FracOrder(0.6), 2.0, rng));
  });
  CHECK(std::abs(m.mean - ml_survival(FracOrder(0.6), 1.0, 2.0)) <= 3 * m.se);
  CHECK_THROWS_AS(sample_inverse_at(FracOrder(0.6), -1.0, rng), DomainError);
}

TEST_CASE("Mittag-Leffler waiting times") {
  RngStream r1(11, 0);
  std::size_t n = 100'000;
  std::size_t alive = 0;
  for (std::size_t k = 0; k < n; ++k) alive += sample_ml_waiting(FracOrder(1.0), 2.0, r1) > 1.0;
  double p = std::exp(-2.0);
  CHECK(std::abs(double(alive) / n - p) <= 3 * binomial_se(p, n));

  RngStream r2(11, 1);
  n = 1'000'000;
  alive = 0;
  for (std::size_t k = 0; k < n; ++k) alive += sample_ml_waiting(FracOrder(0.5), 1.0, r2) > 1.0;
  p = 0.427583576155807;  // e erfc(1)
  CHECK(std::abs(double(alive) / n - p) <= 3 * binomial_se(p, n));

  RngStream r3(11, 2);
  n = 200'000;
  std::vector<double> draws(n);
  for (auto& d : draws) d = sample_ml_waiting(FracOrder(0.7), 1.5, r3);
  for (double t : {0.5, 1.0, 2.0}) {
    const double q = ml_survival(FracOrder(0.7), 1.5, t);
    const double emp = double(std::count_if(draws.begin(), draws.end(),
                                            [&](double d) { return d > t; })) / n;
    CHECK(std::abs(emp - q) <= 3 * binomial_se(q, n));
  }
}

TEST_CASE("waiting time equals first exponential event on the inverse clock") {
  // T > t  iff  an Exp(rate) variable exceeds E(t)
  const double a = 0.7, rate = 1.5;
  const std::size_t n = 200'000;
  RngStream ra(31, 0), rb(31, 1);
  for (double t : {0.3, 1.0, 4.0}) {
    std::size_t wa = 0, wb = 0;
    for (std::size_t k = 0; k < n; ++k) {
      wa += sample_ml_waiting(FracOrder(a), rate, ra) > t;
      wb += rb.exponential() / rate > sample_inverse_at(FracOrder(a), t, rb);
    }
    const double pa = double(wa) / n, pb = double(wb) / n;
    const double se = std::sqrt(binomial_se(pa, n) * binomial_se(pa, n) +
                                binomial_se(pb, n) * binomial_se(pb, n));
    CHECK(std::abs(pa - pb) <= 4 * se);
  }
}

TEST_CASE("deterministic grid at order one") {
  RngStream rng(1, 0);
  const auto g = build_grid(FracOrder(1.0), 0.5, 2.0, rng);
  const std::vector<double> want = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
  REQUIRE(g.values().size() == want.size());
  for (std::size_t k = 0; k < want.size(); ++k) CHECK(g.values()[k] == doctest::Approx(want[k]));
  CHECK(invert_grid(g, 0.7) == doctest::Approx(1.0));
  CHECK(invert_grid(g, 0.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(invert_grid(g, 2.1), DomainError);
  CHECK_THROWS_AS(invert_grid(g, -0.1), DomainError);
}

TEST_CASE("random grids are monotone and invert to a step function") {
  RngStream rng(3, 0);
  const auto g = build_grid(FracOrder(0.5), 0.01, 1.0, rng);
  const auto& v = g.values();
  CHECK(v.front() == 0.0);
  CHECK(v.back() > 1.0);
  for (std::size_t k = 1; k < v.size(); ++k) REQUIRE(v[k] >= v[k - 1]);

  RngStream r7(3, 1);
  const auto g7 = build_grid(FracOrder(0.7), 0.01, 5.0, r7);
  double prev = 0.0;
  for (double t = 0.0; t <= 5.0; t += 0.01) {
    const double e = invert_grid(g7, t);
    REQUIRE(e >= prev);
    const double steps = e / 0.01;
    REQUIRE(std::abs(steps - std::round(steps)) < 1e-9);
    prev = e;
  }
}

TEST_CASE("grid step cap") {
  RngStream rng(3, 0);
  CHECK_THROWS_AS(build_grid(FracOrder(0.9), 1e-3, 100.0, rng, 1000), ResourceError);
}

TEST_CASE("grid reproducibility") {
  RngStream a(8, 2), b(8, 2);
  CHECK(build_grid(FracOrder(0.6), 0.01, 3.0, a).values() ==
        build_grid(FracOrder(0.6), 0.01, 3.0, b).values());
}

TEST_CASE("grid inversion converges as the step shrinks, exact law at one half") {
  // For a = 1/2, P[E(t) <= x] = erf(x / (2 sqrt t)).
  const double t = 1.0;
  const std::size_t n = 20'000;
  std::vector<double> ks;
  for (double delta : {0.1, 0.01, 0.001}) {
    std::vector<double> e(n);
    for (std::size_t k = 0; k < n; ++k) {
      RngStream rng(404, k);
      e[k] = invert_grid(build_grid(FracOrder(0.5), delta, t, rng), t);
    }
    std::sort(e.begin(), e.end());
    double d = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double f = std::erf(e[k] / (2.0 * std::sqrt(t)));
      d = std::max({d, std::abs(double(k + 1) / n - f), std::abs(double(k) / n - f)});
    }
    ks.push_back(d);
  }
  const double crit = 1.63 / std::sqrt(double(n));
  CHECK(ks[0] > crit);
  CHECK(ks[0] > ks[1]);
  CHECK(ks[2] < crit);
}

TEST_CASE("grid inversion two-sample study at order 0.7") {
  const double t = 2.0;
  const std::size_t n = 10'000;
  std::vector<double> direct(n);
  for (std::size_t k = 0; k < n; ++k) {
    RngStream rng(505, k);
    direct[k] = sample_inverse_at(FracOrder(0.7), t, rng);
  }
  std::vector<double> ks;
  for (double delta : {0.1, 0.01, 0.001}) {
    std::vector<double> e(n);
    for (std::size_t k = 0; k < n; ++k) {
      RngStream rng(606, k);
      e[k] = invert_grid(build_grid(FracOrder(0.7), delta, 5.0, rng), t);
    }
    ks.push_back(ks_two_sample(direct, e));
  }
  const double crit = 1.63 * std::sqrt(2.0 / n);
  CHECK(ks[0] > crit);
  CHECK(ks[0] > ks[2]);
  CHECK(ks[2] < crit);
}
