#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fracbd/mlf.hpp"
#include "fracbd/model.hpp"
#include "fracbd/spectral.hpp"

namespace fracbd {

/// Quasi-limiting coefficients P_{i,n} and their normalization.
struct QldResult {
  bool exists = false;       // false: no quasi-limiting distribution
  std::string diagnostic;    // why not, or a note on the limit
  std::size_t i0 = 0;
  std::size_t nmax = 0;
  std::vector<double> coefficients;  // P_{i,1..nmax}, 0-based by n-1
  std::vector<double> pmf;           // coefficients / sum
  double tail_bound = 0.0;           // estimated coefficient mass beyond nmax

  double pmf_at(std::size_t n) const { return n >= 1 && n <= pmf.size() ? pmf[n - 1] : 0.0; }
};

/// P_{i,n} = pi_n (1/mu_1 + sum_{j <= min(i-1, n-1)} 1/(lambda_j pi_j)).
/// When classify() finds B divergent the result has exists = false.
QldResult qld_coefficients(const RateSchedule& rates, std::size_t i0, std::size_t nmax,
                           const ClassifyOptions& opts = {});

/// p_{i0,j}(t) / P_{i0}[T_0 > t] along a time grid.
std::vector<double> qld_limit_check(const SpectralDecomposition& dec, FracOrder alpha,
                                    std::size_t i0, std::size_t j,
                                    const std::vector<double>& t_grid);

/// C_{i,j,k} = sum_k Q_k(i) Q_k(j) gamma_k / theta_k^k for k = 0..k_max.
struct CIntegrals {
  std::size_t i = 0;
  std::size_t j = 0;
  std::array<double, 5> values{};
  std::size_t k_max = 0;

  double operator[](std::size_t k) const { return values.at(k); }
};

CIntegrals c_integrals(const SpectralDecomposition& dec, std::size_t i, std::size_t j,
                       std::size_t k_max = 4);

/// Limit of p_ij(t) / P_i[T > t] in the truncated chain:
/// pi_j C_{i,j,1} / (mu_1 C_{i,1,2}).
double qld_limit_value(const SpectralDecomposition& dec, std::size_t i, std::size_t j);

/// K with  p_ij(t) / P_i[T > t] = limit + K t^-a + o(t^-a)  (a != 1/2), or
/// = limit + K / t + o(1/t) when a = 1/2.
double rate_constant(const SpectralDecomposition& dec, FracOrder alpha, std::size_t i,
                     std::size_t j);

enum class QsdOutcome { proper, negative_entry, zero_mass, not_summable };

const char* to_string(QsdOutcome o);

enum class QsdClass { unique, family, none, undecided };

const char* to_string(QsdClass c);

struct QsdClassification {
  QsdClass kind = QsdClass::undecided;
  double theta_star = 0.0;   // theta_1(M), meaningful for family
  ThetaStarReport theta_report;
  SeriesStatus d_status = SeriesStatus::undecided;
};

struct QsdResult {
  double theta = 0.0;
  std::vector<double> nu;    // nu_1..nu_nmax (0-based)
  double residual = 0.0;     // max |recursion violation| / max nu
  double raw_mass = 0.0;     // sum of nu over 1..nmax
  double tail_mass = 0.0;    // extrapolated mass beyond nmax
  QsdOutcome outcome = QsdOutcome::zero_mass;
  std::optional<QsdClassification> classification;
};

/// Forward recursion from nu_1 = theta / mu_1 (long double). No rescaling:
/// summing the recursion gives sum nu = mu_1 nu_1 / theta = 1 for a proper
/// qsd, so raw_mass + tail_mass close to 1 is the mass check.
QsdResult qsd_solve(const RateSchedule& rates, double theta, std::size_t nmax);

/// Left principal eigenvector of the truncated generator,
/// nu_j proportional to pi_j Q_theta_1(j); theta = theta_1 = mu_1 nu_1.
QsdResult qsd_principal(const SpectralDecomposition& dec);

/// unique when D converges; otherwise family(theta_1(M)) unless theta_1
/// collapses as M grows, which is reported as none.
QsdClassification qsd_classify(const RateSchedule& rates, const ClassifyOptions& opts = {},
                               std::size_t m = 200);

/// max over t and j of |sum_i nu_i p_ij(t) - nu_j E_a(-theta t^a)|.
double qsd_stationarity_check(const SpectralDecomposition& dec, FracOrder alpha,
                              const std::vector<double>& nu, double theta,
                              const std::vector<double>& t_grid);

}  // namespace fracbd
