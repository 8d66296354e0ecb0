#include "fracbd/quasi.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracbd/errors.hpp"

namespace fracbd {

QldResult qld_coefficients(const RateSchedule& rates, std::size_t i0, std::size_t nmax,
                           const ClassifyOptions& opts) {
  if (i0 < 1) throw DomainError("qld_coefficients: i0 must be >= 1");
  if (nmax < i0) throw DomainError("qld_coefficients: nmax must be >= i0");
  QldResult out;
  out.i0 = i0;
  out.nmax = nmax;

  const SeriesClassification cls = classify(rates, opts);
  if (cls.b.status != SeriesStatus::convergent) {
    out.diagnostic = std::string("B series ") + to_string(cls.b.status) +
                     ": coefficients are not summable, no quasi-limiting distribution";
    return out;
  }

  const PiWeights pi = pi_weights(rates, nmax);
  const double mu1 = rates.death(1);
  out.coefficients.resize(nmax);
  double inner = 1.0 / mu1;  // 1/mu_1 + sum_{j <= min(i0-1, n-1)} 1/(lambda_j pi_j)
  for (std::size_t n = 1; n <= nmax; ++n) {
    if (n >= 2 && n - 1 <= i0 - 1) inner += 1.0 / (rates.birth(n - 1) * pi(n - 1));
    out.coefficients[n - 1] = pi(n) * inner;
  }
  double sum = 0.0;
  for (double c : out.coefficients) sum += c;
  out.pmf.resize(nmax);
  for (std::size_t n = 0; n < nmax; ++n) out.pmf[n] = out.coefficients[n] / sum;

  // Geometric extrapolation from the last (up to) 20 pi_n.
  if (nmax >= 3) {
    const std::size_t span = std::min<std::size_t>(19, nmax - 1);
    const double r = std::pow(pi(nmax) / pi(nmax - span), 1.0 / static_cast<double>(span));
    out.tail_bound = (r < 1.0) ? out.coefficients.back() * r / (1.0 - r)
                               : std::numeric_limits<double>::infinity();
  }
  out.exists = true;
  return out;
}

std::vector<double> qld_limit_check(const SpectralDecomposition& dec, FracOrder alpha,
                                    std::size_t i0, std::size_t j,
                                    const std::vector<double>& t_grid) {
  if (j < 1 || j > dec.dim()) throw DomainError("qld_limit_check: j outside truncation");
  const auto rows = transition_rows(dec, alpha, i0, t_grid);
  const auto surv = survival_curve(dec, alpha, i0, t_grid);
  std::vector<double> out(t_grid.size());
  for (std::size_t q = 0; q < t_grid.size(); ++q) out[q] = rows[q][j - 1] / surv[q];
  return out;
}

CIntegrals c_integrals(const SpectralDecomposition& dec, std::size_t i, std::size_t j,
                       std::size_t k_max) {
  if (k_max > 4) throw DomainError("c_integrals: k_max must be <= 4");
  if (i < 1 || j < 1 || i > dec.dim() || j > dec.dim()) {
    throw DomainError("c_integrals: state outside truncation");
  }
  CIntegrals c;
  c.i = i;
  c.j = j;
  c.k_max = k_max;
  const double scale = 1.0 / std::sqrt(dec.pi()(i) * dec.pi()(j));
  for (std::size_t k = 0; k < dec.dim(); ++k) {
    const double base = dec.v(i, k) * dec.v(j, k) * scale;
    double inv_theta_pow = 1.0;
    for (std::size_t p = 0; p <= k_max; ++p) {
      c.values[p] += base * inv_theta_pow;
      inv_theta_pow /= dec.thetas()[k];
    }
  }
  return c;
}

double qld_limit_value(const SpectralDecomposition& dec, std::size_t i, std::size_t j) {
  const CIntegrals cij = c_integrals(dec, i, j, 1);
  const CIntegrals ci1 = c_integrals(dec, i, 1, 2);
  return dec.pi()(j) * cij[1] / (dec.mu1() * ci1[2]);
}

double rate_constant(const SpectralDecomposition& dec, FracOrder alpha, std::size_t i,
                     std::size_t j) {
  const double a = alpha.value();
  if (alpha.is_classical()) throw DomainError("rate_constant: requires alpha < 1");
  const CIntegrals ci1 = c_integrals(dec, i, 1, 4);
  const CIntegrals cij = c_integrals(dec, i, j, 4);
  const double limit = dec.pi()(j) * cij[1] / (dec.mu1() * ci1[2]);
  if (a == 0.5) {
    // Gamma(1/2) / Gamma(-1/2) = -1/2; the t^-2a term vanishes.
    return 0.5 * limit * (ci1[4] / ci1[2] - cij[3] / cij[1]);
  }
  const double gamma_ratio = std::tgamma(1.0 - a) * reciprocal_gamma(1.0 - 2.0 * a);
  return limit * gamma_ratio * (ci1[3] / ci1[2] - cij[2] / cij[1]);
}

const char* to_string(QsdOutcome o) {
  switch (o) {
    case QsdOutcome::proper: return "proper";
    case QsdOutcome::negative_entry: return "negative_entry";
    case QsdOutcome::zero_mass: return "zero_mass";
    case QsdOutcome::not_summable: return "not_summable";
  }
  return "?";
}

const char* to_string(QsdClass c) {
  switch (c) {
    case QsdClass::unique: return "unique";
    case QsdClass::family: return "family";
    case QsdClass::none: return "none";
    case QsdClass::undecided: return "undecided";
  }
  return "?";
}

QsdResult qsd_solve(const RateSchedule& rates, double theta, std::size_t nmax) {
  if (!(theta >= 0.0)) throw DomainError("qsd_solve: theta must be >= 0");
  if (nmax < 2) throw DomainError("qsd_solve: nmax must be >= 2");
  QsdResult out;
  out.theta = theta;

  std::vector<long double> nu(nmax + 2, 0.0L);
  const long double th = theta;
  nu[1] = th / static_cast<long double>(rates.death(1));
  long double peak = nu[1];
  std::size_t filled = 1;
  bool negative = false;
  for (std::size_t j = 1; j < nmax; ++j) {
    const long double lam = rates.birth(j);
    const long double mu = rates.death(j);
    const long double lam_prev = j >= 2 ? rates.birth(j - 1) : 0.0L;
    nu[j + 1] = ((lam + mu - th) * nu[j] - lam_prev * nu[j - 1]) /
                static_cast<long double>(rates.death(j + 1));
    filled = j + 1;
    peak = std::max(peak, nu[j + 1]);
    if (nu[j + 1] < -1e-12L * peak) {
      negative = true;
      break;
    }
  }

  long double mass = 0.0L;
  for (std::size_t j = 1; j <= filled; ++j) mass += nu[j];
  out.raw_mass = static_cast<double>(mass);
  out.nu.resize(filled);
  for (std::size_t j = 1; j <= filled; ++j) out.nu[j - 1] = static_cast<double>(nu[j]);

  if (negative) {
    out.outcome = QsdOutcome::negative_entry;
    return out;
  }
  if (!(peak > 0.0L)) {
    out.outcome = QsdOutcome::zero_mass;
    return out;
  }
  // Tail: geometric or power law fitted on [filled/2, filled]; exponent
  // p <= 1.05 is treated as not summable.
  long double tail = 0.0L;
  if (filled >= 8 && nu[filled] > 0.0L) {
    const std::size_t half = filled / 2;
    const long double ratio = nu[filled] / nu[half];
    const long double p =
        -std::log(ratio) / std::log(static_cast<long double>(filled) / static_cast<long double>(half));
    const long double step = nu[filled] / nu[filled - 1];
    if (step < 1.0L - 1e-3L) {
      tail = nu[filled] * step / (1.0L - step);
    } else if (p > 1.05L) {
      tail = nu[filled] * static_cast<long double>(filled) / (p - 1.0L);
    } else {
      out.outcome = QsdOutcome::not_summable;
      return out;
    }
  }
  out.tail_mass = static_cast<double>(tail);
  // Recursion residual relative to max nu.
  double worst = 0.0;
  double top = *std::max_element(out.nu.begin(), out.nu.end());
  for (std::size_t j = 1; j < filled; ++j) {
    const double prev = j >= 2 ? rates.birth(j - 1) * out.nu[j - 2] : 0.0;
    const double lhs = -theta * out.nu[j - 1];
    const double rhs =
        prev - (rates.birth(j) + rates.death(j)) * out.nu[j - 1] + rates.death(j + 1) * out.nu[j];
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  out.residual = worst / top;
  out.outcome = QsdOutcome::proper;
  return out;
}

QsdResult qsd_principal(const SpectralDecomposition& dec) {
  QsdResult out;
  const std::size_t m = dec.dim();
  out.theta = dec.thetas().front();
  out.nu.resize(m);
  const double sign = dec.v(1, 0) >= 0.0 ? 1.0 : -1.0;
  double mass = 0.0;
  for (std::size_t j = 1; j <= m; ++j) {
    out.nu[j - 1] = sign * std::sqrt(dec.pi()(j)) * dec.v(j, 0);
    mass += out.nu[j - 1];
  }
  out.raw_mass = mass;
  for (double& v : out.nu) v /= mass;
  double top = 0.0;
  bool negative = false;
  for (double v : out.nu) top = std::max(top, v);
  for (double v : out.nu) negative = negative || v < -1e-12 * top;
  out.outcome = negative ? QsdOutcome::negative_entry : QsdOutcome::proper;
  out.residual = std::fabs(out.theta - dec.mu1() * out.nu[0]) / out.theta;
  return out;
}

QsdClassification qsd_classify(const RateSchedule& rates, const ClassifyOptions& opts,
                               std::size_t m) {
  QsdClassification out;
  const SeriesClassification cls = classify(rates, opts);
  out.d_status = cls.d.status;
  if (cls.d.status == SeriesStatus::convergent) {
    out.kind = QsdClass::unique;
    return out;
  }
  if (cls.d.status == SeriesStatus::undecided) return out;
  if (auto top = rates.max_state()) m = std::min(m, *top);
  if (m < 4) return out;
  out.theta_report = theta_star_report(rates, m);
  const double ratio = out.theta_report.theta1_m / out.theta_report.theta1_half;
  if (ratio < 0.75) {
    out.kind = QsdClass::none;  // theta_1 keeps collapsing with M: theta* = 0
  } else {
    out.kind = QsdClass::family;
    out.theta_star = out.theta_report.theta1_m;
  }
  return out;
}

double qsd_stationarity_check(const SpectralDecomposition& dec, FracOrder alpha,
                              const std::vector<double>& nu, double theta,
                              const std::vector<double>& t_grid) {
  const std::size_t m = dec.dim();
  if (nu.size() != m) throw DomainError("qsd_stationarity_check: nu must have M entries");
  double worst = 0.0;
  for (double t : t_grid) {
    const double decay = ml_survival(alpha, theta, t);
    const auto kernel = spectral_kernel(dec, alpha, t);
    std::vector<double> mixed(m, 0.0);
    for (std::size_t i = 1; i <= m; ++i) {
      if (nu[i - 1] == 0.0) continue;
      const double sqrt_pi_i = std::sqrt(dec.pi()(i));
      for (std::size_t j = 1; j <= m; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += dec.v(i, k) * dec.v(j, k) * kernel[k];
        mixed[j - 1] += nu[i - 1] * std::sqrt(dec.pi()(j)) / sqrt_pi_i * s;
      }
    }
    for (std::size_t j = 0; j < m; ++j) worst = std::max(worst, std::fabs(mixed[j] - nu[j] * decay));
  }
  return worst;
}

}  // namespace fracbd
