#include "fracbd/linear.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "fracbd/errors.hpp"
#include "fracbd/paths.hpp"

namespace fracbd {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::subcritical: return "subcritical";
    case Regime::critical: return "critical";
    case Regime::supercritical: return "supercritical";
  }
  return "?";
}

LinearParams::LinearParams(double lambda_, double mu_) : lambda(lambda_), mu(mu_) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw DomainError("linear: lambda and mu must be positive");
}

Regime LinearParams::regime() const {
  if (lambda < mu) return Regime::subcritical;
  if (lambda > mu) return Regime::supercritical;
  return Regime::critical;
}

double p1j_classical(const LinearParams& p, std::size_t j, double t) {
  if (j < 1) throw DomainError("p1j_classical: j must be >= 1");
  if (!(t >= 0.0)) throw DomainError("p1j_classical: t must be >= 0");
  const double k = static_cast<double>(j);
  if (p.regime() == Regime::critical) {
    const double x = p.lambda * t;
    return std::pow(x, k - 1.0) / std::pow(1.0 + x, k + 1.0);
  }
  const double d = p.lambda - p.mu;
  const double e = std::exp(-d * t);
  // (lambda (1 - e))^(j-1) (lambda - mu e)^-(j+1) d^2 e, in a form that keeps
  // the powers bounded for either sign of d.
  const double base = p.lambda * (-std::expm1(-d * t)) / (p.lambda - p.mu * e);
  const double lead = d * d * e / ((p.lambda - p.mu * e) * (p.lambda - p.mu * e));
  return lead * std::pow(base, k - 1.0);
}

namespace {

constexpr double kSeriesRelTol = 1e-14;

// c * sum_{m>=1} r^m g(m), g in (0, 1] nonincreasing; stops on the
// geometric bound c r^(n+1) g(n) / (1 - r).
template <class G>
SurvivalSeries geometric_series(double c, double r, G g, std::size_t max_terms) {
  SurvivalSeries out;
  double sum = 0.0;
  double rm = 1.0;
  for (std::size_t m = 1; m <= max_terms; ++m) {
    rm *= r;
    const double gm = g(static_cast<double>(m));
    sum += rm * gm;
    out.terms = m;
    out.tail_bound = c * rm * r * gm / (1.0 - r);
    if (out.tail_bound <= kSeriesRelTol * c * sum || gm == 0.0) {
      out.value = c * sum;
      return out;
    }
  }
  out.value = c * sum;
  throw AccuracyError("linear survival series: tail bound " + std::to_string(out.tail_bound) +
                      " after " + std::to_string(max_terms) + " terms");
}

}  // namespace

double survival_classical(const LinearParams& p, double t) {
  if (!(t >= 0.0)) throw DomainError("survival_classical: t must be >= 0");
  if (t == 0.0) return 1.0;
  switch (p.regime()) {
    case Regime::critical:
      return 1.0 / (1.0 + p.lambda * t);
    case Regime::subcritical: {
      const double d = p.mu - p.lambda;
      return geometric_series(d / p.lambda, p.lambda / p.mu,
                              [&](double m) { return std::exp(-d * m * t); }, 100000)
          .value;
    }
    case Regime::supercritical: {
      const double d = p.lambda - p.mu;
      const double c = d / p.lambda;
      return c + geometric_series(c, p.mu / p.lambda,
                                  [&](double m) { return std::exp(-d * m * t); }, 100000)
                     .value;
    }
  }
  return 0.0;
}

SurvivalSeries survival_fractional(const LinearParams& p, FracOrder alpha, double t,
                                   std::size_t max_terms) {
  if (!(t >= 0.0)) throw DomainError("survival_fractional: t must be >= 0");
  if (t == 0.0) return {1.0, 0.0, 0};
  if (alpha.is_classical()) return {survival_classical(p, t), 0.0, 0};
  switch (p.regime()) {
    case Regime::subcritical: {
      const double d = p.mu - p.lambda;
      return geometric_series(d / p.lambda, p.lambda / p.mu,
                              [&](double m) { return ml_survival(alpha, d * m, t); }, max_terms);
    }
    case Regime::supercritical: {
      const double d = p.lambda - p.mu;
      const double c = d / p.lambda;
      auto s = geometric_series(c, p.mu / p.lambda,
                                [&](double m) { return ml_survival(alpha, d * m, t); }, max_terms);
      s.value += c;
      return s;
    }
    case Regime::critical: {
      thread_local boost::math::quadrature::exp_sinh<double> integrator;
      const double scale = p.lambda * std::pow(t, alpha.value());
      auto f = [&](double z) {
        const double w = std::exp(-z);
        return w == 0.0 ? 0.0 : w * ml_survival(alpha, scale * z, 1.0);
      };
      double err = 0.0;
      double l1 = 0.0;
      const double v = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(),
                                            1e-12, &err, &l1);
      if (!(err <= 1e-9 * std::max(v, 1e-300))) {
        throw AccuracyError("survival_fractional: quadrature error " + std::to_string(err));
      }
      return {v, err, 0};
    }
  }
  return {};
}

double tail_constant_subcritical(const LinearParams& p, FracOrder alpha) {
  if (p.regime() != Regime::subcritical) {
    throw DomainError("tail_constant_subcritical: requires lambda < mu");
  }
  if (alpha.is_classical()) throw DomainError("tail_constant_subcritical: requires alpha < 1");
  return -std::log1p(-p.lambda / p.mu) / (p.lambda * std::tgamma(1.0 - alpha.value()));
}

QldResult qld_linear(const LinearParams& p, std::size_t i0, std::size_t nmax) {
  if (i0 < 1) throw DomainError("qld_linear: i0 must be >= 1");
  if (nmax < i0) throw DomainError("qld_linear: nmax must be >= i0");
  QldResult out;
  out.i0 = i0;
  out.nmax = nmax;
  if (p.regime() != Regime::subcritical) {
    out.diagnostic = std::string("no quasi-limiting distribution in the ") +
                     to_string(p.regime()) + " regime";
    return out;
  }
  const double r = p.lambda / p.mu;
  out.coefficients.resize(nmax);
  double inner = 1.0 / p.mu;
  double pi_n = 1.0;   // r^(n-1) / n, built without overflow
  double rpow = 1.0;   // r^(n-1)
  for (std::size_t n = 1; n <= nmax; ++n) {
    if (n >= 2) {
      if (n - 1 <= i0 - 1) inner += 1.0 / (p.lambda * rpow);  // 1/(lambda_j pi_j), j = n-1
      rpow *= r;
    }
    pi_n = rpow / static_cast<double>(n);
    out.coefficients[n - 1] = pi_n * inner;
  }
  double sum = 0.0;
  for (double c : out.coefficients) sum += c;
  out.pmf.resize(nmax);
  for (std::size_t n = 0; n < nmax; ++n) out.pmf[n] = out.coefficients[n] / sum;
  out.tail_bound = out.coefficients.back() * r / (1.0 - r);
  out.exists = true;
  out.diagnostic =
      "as i0 -> infinity, P_{i0,j} -> (1/(lambda j)) (1 - r^j) / (1/r - 1), "
      "which is not summable and so not a probability measure";
  return out;
}

SupercriticalTail supercritical_tail(const LinearParams& p, FracOrder alpha) {
  if (p.regime() != Regime::supercritical) {
    throw DomainError("supercritical_tail: requires lambda > mu");
  }
  SupercriticalTail out;
  out.limit = (p.lambda - p.mu) / p.lambda;
  out.rate_divergent_form = std::numeric_limits<double>::infinity();
  if (alpha.is_classical()) return out;
  out.rate = -std::log1p(-p.mu / p.lambda) / (p.lambda * std::tgamma(1.0 - alpha.value()));
  return out;
}

WitnessReport critical_no_qld_witness(const LinearParams& p, FracOrder alpha,
                                      const std::vector<double>& t_grid, std::size_t n_paths,
                                      std::uint64_t seed, std::size_t j_max) {
  if (p.regime() != Regime::critical) {
    throw DomainError("critical_no_qld_witness: requires lambda == mu");
  }
  WitnessReport rep;
  rep.j_max = j_max;
  const RateSchedule rates = p.rates();
  const double a = alpha.value();
  for (double t : t_grid) {
    const MarginalPmf pmf = estimate_pmf(SimMethod::timechange, rates, alpha, 1, t, n_paths, seed);
    WitnessRow row;
    row.t = t;
    const double ta = std::pow(t, a);
    const double ll = std::log(std::log(ta));
    row.f = ta * std::pow(ll, 1.0 - a);
    row.survival = 1.0 - pmf.at(0);
    row.scaled = row.f * row.survival;
    row.survivors = static_cast<std::size_t>(
        std::llround(row.survival * static_cast<double>(pmf.n_paths)));
    double low = 0.0;
    for (std::size_t j = 1; j <= j_max; ++j) low += pmf.at(j);
    if (row.survival > 0.0) {
      row.cond_mass = low / row.survival;
      row.cond_mass_se = std::sqrt(row.cond_mass * (1.0 - row.cond_mass) /
                                   std::max<double>(1.0, static_cast<double>(row.survivors)));
    }
    rep.discarded += pmf.discarded;
    rep.rows.push_back(row);
  }
  rep.cond_mass_decreasing = rep.rows.size() >= 2;
  for (std::size_t q = 1; q < rep.rows.size(); ++q) {
    if (!(rep.rows[q].cond_mass < rep.rows[q - 1].cond_mass)) rep.cond_mass_decreasing = false;
  }
  return rep;
}

}  // namespace fracbd
