#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fracbd/mlf.hpp"
#include "fracbd/model.hpp"
#include "fracbd/quasi.hpp"

namespace fracbd {

enum class Regime { subcritical, critical, supercritical };

const char* to_string(Regime r);

/// Linear process lambda_i = i lambda, mu_i = i mu.
struct LinearParams {
  double lambda;
  double mu;

  LinearParams(double lambda, double mu);

  Regime regime() const;
  RateSchedule rates() const { return RateSchedule::linear(lambda, mu); }
};

/// P_1[N(t) = j] for the classical (a = 1) process, j >= 1.
double p1j_classical(const LinearParams& p, std::size_t j, double t);

/// P_1[T_0 > t] for a = 1. The lambda != mu branches are summed as
/// geometric series to relative tolerance 1e-14.
double survival_classical(const LinearParams& p, double t);

struct SurvivalSeries {
  double value = 0.0;
  double tail_bound = 0.0;  // bound on the omitted terms
  std::size_t terms = 0;
};

/// P_1[T_{0,a} > t].
///   lambda < mu : ((mu-lambda)/lambda) sum_m (lambda/mu)^m E_a(-(mu-lambda) m t^a)
///   lambda > mu : ((lambda-mu)/lambda) (1 + sum_m (mu/lambda)^m E_a(-(lambda-mu) m t^a))
///   lambda = mu : int_0^inf e^-z E_a(-lambda t^a z) dz
/// Series stop once the geometric tail bound is below 1e-14 of the sum or
/// after max_terms terms; an unmet bound is an AccuracyError.
SurvivalSeries survival_fractional(const LinearParams& p, FracOrder alpha, double t,
                                   std::size_t max_terms = 5000);

/// lim t^a P_1[T > t] = -ln(1 - lambda/mu) / (lambda Gamma(1-a)), lambda < mu.
double tail_constant_subcritical(const LinearParams& p, FracOrder alpha);

/// Closed-form QLD of the linear process, from
///   P_{i,n} = ((lambda/mu)^(n-1) / n) (1/mu + sum_{j=1}^{min(i-1,n-1)} (mu/lambda)^(j-1) / lambda).
/// lambda >= mu gives exists = false.
QldResult qld_linear(const LinearParams& p, std::size_t i0, std::size_t nmax);

struct SupercriticalTail {
  double limit = 0.0;  // (lambda - mu) / lambda
  double rate = 0.0;   // lim t^a (P_1[T > t] - limit)
  /// The constant with the sum over (lambda/mu)^m / m, which diverges for
  /// lambda > mu; kept for comparison and always +inf.
  double rate_divergent_form = 0.0;
};

/// rate = -ln(1 - mu/lambda) / (lambda Gamma(1-a)), from the expansion of
/// the lambda > mu series term by term. a = 1 gives rate 0.
SupercriticalTail supercritical_tail(const LinearParams& p, FracOrder alpha);

struct WitnessRow {
  double t = 0.0;
  double f = 0.0;          // t^a (log log t^a)^(1-a); NaN when log log is undefined
  double survival = 0.0;   // empirical P_1[T > t]
  double scaled = 0.0;     // f * survival
  double cond_mass = 0.0;  // P_1[1 <= N(t) <= J | T > t]
  double cond_mass_se = 0.0;
  std::size_t survivors = 0;
};

struct WitnessReport {
  std::vector<WitnessRow> rows;
  std::size_t j_max = 10;
  bool cond_mass_decreasing = false;
  std::size_t discarded = 0;
};

/// Monte Carlo witness that the critical process has no QLD: conditional
/// mass on {1..j_max} along t_grid (time-change simulator).
WitnessReport critical_no_qld_witness(const LinearParams& p, FracOrder alpha,
                                      const std::vector<double>& t_grid, std::size_t n_paths,
                                      std::uint64_t seed, std::size_t j_max = 10);

}  // namespace fracbd
