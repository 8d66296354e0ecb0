#include "fracbd/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracbd/errors.hpp"

namespace fracbd {

RateSchedule RateSchedule::linear(double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0)) {
    throw DomainError("linear rates need lambda > 0 and mu > 0");
  }
  RateSchedule r;
  r.linear_ = true;
  r.lambda_ = lambda;
  r.mu_ = mu;
  return r;
}

RateSchedule RateSchedule::table(std::vector<double> birth, std::vector<double> death) {
  if (birth.size() != death.size() || birth.size() < 2) {
    throw DomainError("rate table needs matching birth/death columns covering state 1");
  }
  if (birth[0] != 0.0 || death[0] != 0.0) {
    throw DomainError("rate table row 0 must be 0,0 (lambda_0 = mu_0 = 0)");
  }
  const std::size_t top = birth.size() - 1;
  for (std::size_t i = 1; i <= top; ++i) {
    const bool birth_ok = birth[i] > 0.0 || (i == top && birth[i] == 0.0);
    if (!birth_ok || !(death[i] > 0.0)) {
      throw DomainError("rate table: rates must be positive at state " + std::to_string(i));
    }
  }
  RateSchedule r;
  r.birth_ = std::move(birth);
  r.death_ = std::move(death);
  return r;
}

std::optional<std::size_t> RateSchedule::max_state() const {
  if (linear_) return std::nullopt;
  return birth_.size() - 1;
}

double RateSchedule::birth(std::size_t i) const {
  if (linear_) return lambda_ * static_cast<double>(i);
  if (i >= birth_.size()) {
    throw DomainError("rate index " + std::to_string(i) + " out of table range");
  }
  return birth_[i];
}

double RateSchedule::death(std::size_t i) const {
  if (linear_) return mu_ * static_cast<double>(i);
  if (i >= death_.size()) {
    throw DomainError("rate index " + std::to_string(i) + " out of table range");
  }
  return death_[i];
}

std::string RateSchedule::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (linear_) {
    os << "linear(lambda=" << lambda_ << ",mu=" << mu_ << ")";
  } else {
    os << "table(states=" << birth_.size() - 1 << ")";
  }
  return os.str();
}

PiWeights pi_weights(const RateSchedule& rates, std::size_t m) {
  if (m < 1) throw DomainError("pi_weights: M must be >= 1");
  if (auto top = rates.max_state(); top && m > *top) {
    throw DomainError("pi_weights: M exceeds the rate table");
  }
  PiWeights out;
  out.values.resize(m);
  out.values[0] = 1.0;
  if (m <= 10000) {
    for (std::size_t n = 1; n < m; ++n) {
      out.values[n] = out.values[n - 1] * rates.birth(n) / rates.death(n + 1);
    }
  } else {
    double log_pi = 0.0;
    for (std::size_t n = 1; n < m; ++n) {
      log_pi += std::log(rates.birth(n)) - std::log(rates.death(n + 1));
      out.values[n] = std::exp(log_pi);
    }
  }
  return out;
}

StepProbs embedded_step_prob(const RateSchedule& rates, std::size_t i) {
  if (i == 0) throw DomainError("embedded_step_prob: state 0 is absorbing");
  const double up = rates.birth(i);
  const double down = rates.death(i);
  const double total = up + down;
  return {up / total, down / total};
}

const char* to_string(SeriesStatus s) {
  switch (s) {
    case SeriesStatus::convergent: return "convergent";
    case SeriesStatus::diverged: return "diverged";
    case SeriesStatus::undecided: return "undecided";
  }
  return "?";
}

namespace {

// Decide a positive series from its leading terms.
//   - partial sum above 1/tol, an infinite term, or trailing terms that do
//     not decrease: diverged
//   - trailing ratio bounded below 1: geometric tail, convergent
//   - ratio -> 1: fit a ~ n^-p over the window; p < 1.05 diverged,
//     p > 1.2 convergent with tail ~ a_n n / (p - 1), else undecided
// `complete` marks a finite chain whose series end with the given terms.
SeriesValue decide(const std::vector<double>& terms, std::size_t offset,
                   double tol, std::size_t window, bool complete) {
  SeriesValue out;
  double sum = 0.0;
  for (double t : terms) {
    sum += t;
    if (!std::isfinite(t) || sum > 1.0 / tol) {
      out.status = SeriesStatus::diverged;
      out.partial_sum = sum;
      out.terms = terms.size();
      return out;
    }
  }
  out.partial_sum = sum;
  out.terms = terms.size();
  if (complete) {
    out.status = SeriesStatus::convergent;
    return out;
  }
  const std::size_t n = terms.size();
  if (n < window + 10) return out;

  const double last = terms[n - 1];
  if (last == 0.0) {
    out.status = SeriesStatus::convergent;
    return out;
  }
  bool decreasing = true;
  double max_ratio = 0.0;
  for (std::size_t k = n - window; k < n; ++k) {
    const double r = terms[k] / terms[k - 1];
    if (!(r < 1.0)) decreasing = false;
    max_ratio = std::max(max_ratio, r);
  }
  if (!decreasing) {
    if (terms[n - 1] >= terms[n - 1 - window]) out.status = SeriesStatus::diverged;
    return out;
  }
  if (max_ratio <= 1.0 - 1e-3) {
    out.tail_bound = last * max_ratio / (1.0 - max_ratio);
    out.status = SeriesStatus::convergent;
    return out;
  }
  // Index of the last term in the series numbering (offset = first index).
  const double n_hi = static_cast<double>(offset + n - 1);
  const double n_lo = static_cast<double>(offset + n - 1 - window);
  const double p = -std::log(last / terms[n - 1 - window]) / std::log(n_hi / n_lo);
  if (p < 1.05) {
    out.status = SeriesStatus::diverged;
  } else if (p > 1.2) {
    out.tail_bound = last * n_hi / (p - 1.0);
    out.status = SeriesStatus::convergent;
  }
  return out;
}

}  // namespace

std::optional<bool> SeriesClassification::absorbed_almost_surely() const {
  if (a.status == SeriesStatus::undecided) return std::nullopt;
  return a.status == SeriesStatus::diverged;
}

std::optional<bool> SeriesClassification::finite_mean_absorption() const {
  if (b.status == SeriesStatus::undecided) return std::nullopt;
  return b.status == SeriesStatus::convergent;
}

std::optional<bool> SeriesClassification::comes_down_from_infinity() const {
  if (d.status == SeriesStatus::undecided) return std::nullopt;
  return d.status == SeriesStatus::convergent;
}

SeriesClassification classify(const RateSchedule& rates, const ClassifyOptions& opts) {
  if (opts.max_terms < 10) throw DomainError("classify: max_terms must be >= 10");
  if (!(opts.tolerance > 0.0)) throw DomainError("classify: tolerance must be positive");

  std::size_t n = opts.max_terms;
  bool complete = false;
  if (auto top = rates.max_state()) {
    n = std::min(n, *top);
    complete = (n == *top) && rates.birth(*top) == 0.0;
  }

  // log pi_i for i = 1..n (0-based storage).
  std::vector<double> log_pi(n);
  log_pi[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    log_pi[i] = log_pi[i - 1] + std::log(rates.birth(i)) - std::log(rates.death(i + 1));
  }

  std::vector<double> a_terms(n);
  std::vector<double> b_terms(n);
  std::vector<double> c_terms(n);
  double lower_ratio = 0.0;  // sum_{j<=i} pi_j / pi_i
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = k + 1;
    const double lam = rates.birth(i);
    b_terms[k] = std::exp(log_pi[k]);
    a_terms[k] = (lam > 0.0) ? std::exp(-std::log(lam) - log_pi[k])
                             : std::numeric_limits<double>::infinity();
    lower_ratio = (k == 0) ? 1.0 : 1.0 + rates.death(i) / rates.birth(i - 1) * lower_ratio;
    c_terms[k] = (lam > 0.0) ? lower_ratio / lam : std::numeric_limits<double>::infinity();
  }

  SeriesClassification out;
  out.tolerance = opts.tolerance;
  out.terms_used = n;
  out.a = decide(a_terms, 1, opts.tolerance, opts.tail_window, complete);
  out.b = decide(b_terms, 1, opts.tolerance, opts.tail_window, complete);
  out.c = decide(c_terms, 1, opts.tolerance, opts.tail_window, complete);
  // A finite chain ending in a reflecting state is never "absorbed with
  // positive probability of escape": its A-series is infinite via lambda_top = 0.
  if (complete) {
    out.a.status = SeriesStatus::diverged;
    out.c.status = SeriesStatus::diverged;
  }

  // D needs the tail sums of pi; go through R_i = sum_{j>=i} pi_j / pi_i,
  // R_i = 1 + (lambda_i / mu_{i+1}) R_{i+1}, run backward from a seeded R_n.
  if (out.b.status != SeriesStatus::convergent) {
    out.d.status = out.b.status;
    out.d.terms = n;
    return out;
  }
  // Seed R_n from the local behaviour of pi in log space (pi_n itself may
  // have underflowed): geometric ratio, else a power-law fit over the window.
  double r_top = 1.0;
  if (!complete && n >= 2) {
    const double step = std::exp(log_pi[n - 1] - log_pi[n - 2]);
    if (step < 1.0 - 1e-3) {
      r_top = 1.0 / (1.0 - step);
    } else {
      const std::size_t w = std::min(opts.tail_window, n - 1);
      const double nn = static_cast<double>(n);
      const double p = -(log_pi[n - 1] - log_pi[n - 1 - w]) / std::log(nn / (nn - static_cast<double>(w)));
      r_top = p > 1.0 ? 1.0 + nn / (p - 1.0) : std::numeric_limits<double>::infinity();
    }
  }
  std::vector<double> d_terms;
  if (n >= 2) {
    d_terms.resize(n - 1);
    double upper_ratio = r_top;
    d_terms[n - 2] = upper_ratio / rates.death(n);
    for (std::size_t i = n - 1; i >= 2; --i) {
      upper_ratio = 1.0 + rates.birth(i) / rates.death(i + 1) * upper_ratio;
      d_terms[i - 2] = upper_ratio / rates.death(i);
    }
  }
  out.d = decide(d_terms, 2, opts.tolerance, opts.tail_window, complete);
  return out;
}

const char* to_string(Boundary b) {
  return b == Boundary::reflect ? "reflect" : "absorb";
}

Boundary parse_boundary(const std::string& s) {
  if (s == "reflect") return Boundary::reflect;
  if (s == "absorb") return Boundary::absorb;
  throw DomainError("unknown boundary policy '" + s + "' (expected reflect|absorb)");
}

double GeneratorMatrix::at(std::size_t i, std::size_t j) const {
  const std::size_t m = dim();
  if (i < 1 || j < 1 || i > m || j > m) throw DomainError("generator index out of range");
  if (i == j) return diag[i - 1];
  if (j == i + 1) return super[i - 1];
  if (i == j + 1) return sub[j - 1];
  return 0.0;
}

double GeneratorMatrix::row_sum(std::size_t i) const {
  double s = at(i, i);
  if (i > 1) s += at(i, i - 1);
  if (i < dim()) s += at(i, i + 1);
  return s;
}

GeneratorMatrix build_generator(const RateSchedule& rates, std::size_t m, Boundary boundary) {
  if (m < 1) throw DomainError("build_generator: M must be >= 1");
  if (auto top = rates.max_state(); top && m > *top) {
    throw DomainError("build_generator: M exceeds the rate table");
  }
  GeneratorMatrix g;
  g.boundary = boundary;
  g.killing = rates.death(1);
  g.diag.resize(m);
  g.super.resize(m - 1);
  g.sub.resize(m - 1);
  for (std::size_t i = 1; i <= m; ++i) {
    double lam = rates.birth(i);
    if (i == m && boundary == Boundary::reflect) lam = 0.0;
    g.diag[i - 1] = -(lam + rates.death(i));
    if (i < m) {
      g.super[i - 1] = rates.birth(i);
      g.sub[i - 1] = rates.death(i + 1);
    }
  }
  return g;
}

}  // namespace fracbd
