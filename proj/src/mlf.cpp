#include "fracbd/mlf.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracbd/errors.hpp"

namespace fracbd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// sin(pi z) without the loss of precision of sin(M_PI * z) near integers.
double sin_pi(double z) {
  const double n = std::round(z);
  const double r = z - n;
  const double s = std::sin(kPi * r);
  return (static_cast<long long>(n) % 2 == 0) ? s : -s;
}

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

double series(double alpha, double x) {
  CompensatedSum acc;
  acc.add(1.0);
  const double log_abs = std::log(std::abs(x));
  int small_run = 0;
  for (int k = 1; k < 20000; ++k) {
    const double arg = alpha * k + 1.0;
    double term;
    if (arg < 170.0) {
      term = std::pow(x, k) / std::tgamma(arg);
    } else {
      term = std::exp(k * log_abs - std::lgamma(arg));
      if (x < 0 && (k % 2 == 1)) term = -term;
    }
    acc.add(term);
    // Terms decrease monotonically once alpha k + 1 exceeds |x|^(1/alpha);
    // require a run of negligible terms before stopping.
    if (std::abs(term) <= 0.25 * kEps * std::abs(acc.value())) {
      if (++small_run >= 3) return acc.value();
    } else {
      small_run = 0;
    }
  }
  throw NumericalError("ml_eval: power series did not converge at x=" +
                       std::to_string(x));
}

struct AsymptoticSum {
  double value = 0.0;
  double error = std::numeric_limits<double>::infinity();
};

// sum_{m=1}^{N} (-1)^{m+1} y^{-m} / Gamma(1 - m a), y > 0, truncated before
// the first nonzero term that is larger than its nonzero predecessor.
AsymptoticSum asymptotic(double alpha, double y, int max_terms) {
  AsymptoticSum out;
  CompensatedSum acc;
  double prev_mag = std::numeric_limits<double>::infinity();
  double pow_inv = 1.0;
  for (int m = 1; m <= max_terms + 1; ++m) {
    pow_inv /= y;
    const double rg = reciprocal_gamma(1.0 - m * alpha);
    if (rg == 0.0) continue;
    const double term = ((m % 2 == 1) ? 1.0 : -1.0) * pow_inv * rg;
    const double mag = std::abs(term);
    if (m == max_terms + 1 || mag > prev_mag) {
      out.error = mag;
      break;
    }
    acc.add(term);
    prev_mag = mag;
    if (mag <= kEps * std::abs(acc.value())) {
      out.error = mag;
      break;
    }
  }
  out.value = acc.value();
  return out;
}

// E_a(-x) = 1/(a pi) int_0^{a pi} exp(-(x sin(p) / sin(a pi - p))^(1/a)) dp.
// The integrand lies in [0, 1], so the quadrature error is relative.
double integral(double alpha, double x, double rel_tol) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  const double upper = alpha * kPi;
  const double inv_alpha = 1.0 / alpha;
  auto f = [&](double p) -> double {
    const double s_hi = std::sin(upper - p);
    if (s_hi <= 0.0) return 0.0;
    const double u = x * std::sin(p) / s_hi;
    return std::exp(-std::pow(u, inv_alpha));
  };
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double v =
      integrator.integrate(f, 0.0, upper, rel_tol, &err, &l1, &levels);
  if (!(err <= 100.0 * rel_tol * std::abs(v)) || !(v > 0.0)) {
    throw AccuracyError("ml_eval: quadrature error " + std::to_string(err) +
                        " at x=-" + std::to_string(x));
  }
  return v / upper;
}

}  // namespace

FracOrder::FracOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("fractional order must lie in (0, 1], got " +
                      std::to_string(alpha));
  }
}

void MlEvalConfig::validate() const {
  if (!(series_threshold >= 0.0) || !(series_threshold <= asym_threshold)) {
    throw DomainError("MlEvalConfig: need 0 <= series_threshold <= asym_threshold");
  }
  if (!(target_rel_err > 0.0)) {
    throw DomainError("MlEvalConfig: target_rel_err must be positive");
  }
  if (asym_terms < 2) {
    throw DomainError("MlEvalConfig: asym_terms must be >= 2");
  }
}

double reciprocal_gamma(double z) {
  if (z <= 0.0 && z == std::floor(z)) return 0.0;
  if (z >= 0.5) {
    if (z < 170.0) return 1.0 / std::tgamma(z);
    return std::exp(-std::lgamma(z));
  }
  // Reflection: 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi.
  const double w = 1.0 - z;
  const double g = (w < 170.0) ? std::tgamma(w) : std::exp(std::lgamma(w));
  return sin_pi(z) * g / kPi;
}

double ml_eval(FracOrder order, double x, const MlEvalConfig& cfg) {
  if (std::isnan(x)) throw DomainError("ml_eval: x is NaN");
  const double alpha = order.value();
  if (x == 0.0) return 1.0;
  if (order.is_classical()) return std::exp(x);

  if (x > 0.0) {
    if (std::pow(x, 1.0 / alpha) > 700.0) {
      throw UnsupportedDomain("ml_eval: positive argument " + std::to_string(x) +
                              " outside the supported range");
    }
    return series(alpha, x);  // all terms positive
  }

  const double y = -x;
  if (y <= cfg.series_threshold) return series(alpha, x);
  if (y >= cfg.asym_threshold) {
    const AsymptoticSum a = asymptotic(alpha, y, cfg.asym_terms);
    if (a.error <= cfg.target_rel_err * std::abs(a.value)) return a.value;
  }
  return integral(alpha, y, std::min(1e-12, 0.01 * cfg.target_rel_err));
}

double ml_survival(FracOrder alpha, double theta, double t,
                   const MlEvalConfig& cfg) {
  if (!(theta > 0.0)) throw DomainError("ml_survival: theta must be positive");
  if (!(t >= 0.0)) throw DomainError("ml_survival: t must be nonnegative");
  if (t == 0.0) return 1.0;
  if (std::isinf(t)) return 0.0;
  return ml_eval(alpha, -theta * std::pow(t, alpha.value()), cfg);
}

double ml_tail_expansion(FracOrder order, double theta, double t, int n_terms,
                         const MlEvalConfig& cfg) {
  if (!(theta > 0.0)) throw DomainError("ml_tail_expansion: theta must be positive");
  if (!(t > 0.0)) throw DomainError("ml_tail_expansion: t must be positive");
  if (n_terms < 1 || n_terms > cfg.asym_terms) {
    throw DomainError("ml_tail_expansion: n_terms must lie in [1, asym_terms]");
  }
  const double alpha = order.value();
  const double y = theta * std::pow(t, alpha);
  if (y < cfg.asym_threshold) {
    throw AccuracyError("ml_tail_expansion: theta t^a = " + std::to_string(y) +
                        " is below the asymptotic threshold");
  }
  CompensatedSum acc;
  double pow_inv = 1.0;
  for (int m = 1; m <= n_terms; ++m) {
    pow_inv /= y;
    acc.add(((m % 2 == 1) ? 1.0 : -1.0) * pow_inv * reciprocal_gamma(1.0 - m * alpha));
  }
  return acc.value();
}

LaplaceCheck ml_laplace_residual(FracOrder order, double theta, double s,
                                 const QuadConfig& quad,
                                 const MlEvalConfig& cfg) {
  if (!(s > 0.0)) throw DomainError("ml_laplace_residual: s must be positive");
  if (!(theta > 0.0)) throw DomainError("ml_laplace_residual: theta must be positive");
  const double alpha = order.value();

  LaplaceCheck out;
  out.exact = std::pow(s, alpha - 1.0) / (std::pow(s, alpha) + theta);

  // Cut at T with e^{-sT}/s <= truncation_tol; the remaining tail is bounded
  // by E_a(-theta T^a) e^{-sT} / s because E_a(-theta t^a) is non-increasing.
  const double horizon = -std::log(quad.truncation_tol * s) / s;
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  auto f = [&](double t) { return std::exp(-s * t) * ml_survival(order, theta, t, cfg); };
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  double numeric = 0.0;
  try {
    numeric = integrator.integrate(f, 0.0, horizon, quad.rel_tol, &err, &l1, &levels);
  } catch (const std::exception&) {
    out.converged = false;
    out.quad_error = std::numeric_limits<double>::infinity();
    return out;
  }

  double tail_kernel;
  const double y = theta * std::pow(horizon, alpha);
  if (order.is_classical()) {
    tail_kernel = std::exp(-y);
  } else if (y >= cfg.asym_threshold) {
    tail_kernel = ml_tail_expansion(order, theta, horizon, 1, cfg);
  } else {
    tail_kernel = ml_survival(order, theta, horizon, cfg);
  }
  const double tail = tail_kernel * std::exp(-s * horizon) / s;

  out.numeric = numeric + 0.5 * tail;
  out.quad_error = err + 0.5 * tail;
  out.residual = std::abs(out.numeric - out.exact);
  out.converged = err <= 100.0 * quad.rel_tol * std::max(1.0, std::abs(numeric));
  return out;
}

}  // namespace fracbd
