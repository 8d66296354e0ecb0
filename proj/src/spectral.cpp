#include "fracbd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracbd/errors.hpp"
#include "fracbd/tridiag.hpp"

namespace fracbd {

SpectralDecomposition::SpectralDecomposition(std::vector<double> thetas,
                                             std::vector<double> vectors, PiWeights pi,
                                             double mu1, Boundary boundary)
    : thetas_(std::move(thetas)),
      vectors_(std::move(vectors)),
      pi_(std::move(pi)),
      mu1_(mu1),
      boundary_(boundary) {
  const std::size_t m = thetas_.size();
  if (m == 0 || vectors_.size() != m * m || pi_.size() != m) {
    throw DomainError("SpectralDecomposition: inconsistent sizes");
  }
}

double SpectralDecomposition::weight(std::size_t j, std::size_t k) const {
  return v(j, k) / (std::sqrt(pi_(j)) * v(1, k));
}

double SpectralDecomposition::gamma_mass(std::size_t k) const {
  const double v1 = v(1, k);
  return v1 * v1;
}

double SpectralDecomposition::orthonormality_residual() const {
  const std::size_t m = dim();
  double worst = 0.0;
  for (std::size_t j = 1; j <= m; ++j) {
    for (std::size_t jp = j; jp <= m; ++jp) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += weight(j, k) * weight(jp, k) * gamma_mass(k);
      s *= std::sqrt(pi_(j) * pi_(jp));
      worst = std::max(worst, std::fabs(s - (j == jp ? 1.0 : 0.0)));
    }
  }
  return worst;
}

SpectralDecomposition decompose(const GeneratorMatrix& gen, const PiWeights& pi) {
  const std::size_t m = gen.dim();
  if (pi.size() != m) throw DomainError("decompose: pi weights do not match the generator");
  std::vector<double> diag(m);
  std::vector<double> off(m > 0 ? m - 1 : 0);
  for (std::size_t i = 0; i < m; ++i) diag[i] = -gen.diag[i];
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (!(gen.super[i] > 0.0) || !(gen.sub[i] > 0.0)) {
      throw DomainError("decompose: off-diagonals must be positive");
    }
    off[i] = -std::sqrt(gen.super[i] * gen.sub[i]);
  }
  auto eig = sym_tridiag_eigen(diag, off);
  if (!(eig.eigenvalues.front() > 0.0)) {
    throw NumericalError("decompose: nonpositive eigenvalue " +
                         std::to_string(eig.eigenvalues.front()));
  }
  return SpectralDecomposition(std::move(eig.eigenvalues), std::move(eig.vectors), pi,
                               gen.killing, gen.boundary);
}

SpectralDecomposition decompose(const RateSchedule& rates, std::size_t m, Boundary boundary) {
  return decompose(build_generator(rates, m, boundary), pi_weights(rates, m));
}

PolynomialTable eval_polynomial(const RateSchedule& rates, double theta, std::size_t i_max) {
  if (i_max < 1) throw DomainError("eval_polynomial: i_max must be >= 1");
  PolynomialTable tab;
  tab.theta = theta;
  tab.values.assign(i_max + 1, 0.0);
  tab.values[1] = 1.0;
  for (std::size_t i = 1; i < i_max; ++i) {
    const double lam = rates.birth(i);
    const double mu = rates.death(i);
    tab.values[i + 1] = ((lam + mu - theta) * tab.values[i] - mu * tab.values[i - 1]) / lam;
  }
  return tab;
}

namespace {

void check_state(const SpectralDecomposition& dec, std::size_t i) {
  if (i < 1 || i > dec.dim()) {
    throw DomainError("state " + std::to_string(i) + " outside the truncation 1.." +
                      std::to_string(dec.dim()));
  }
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and >= 0");
}

}  // namespace

std::vector<double> spectral_kernel(const SpectralDecomposition& dec, FracOrder alpha, double t) {
  check_time(t);
  std::vector<double> e(dec.dim());
  for (std::size_t k = 0; k < dec.dim(); ++k) e[k] = ml_survival(alpha, dec.thetas()[k], t);
  return e;
}

namespace {

std::vector<double> row_from_kernel(const SpectralDecomposition& dec, std::size_t i,
                                    const std::vector<double>& e) {
  const std::size_t m = dec.dim();
  std::vector<double> row(m);
  const double sqrt_pi_i = std::sqrt(dec.pi()(i));
  for (std::size_t j = 1; j <= m; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += dec.v(i, k) * dec.v(j, k) * e[k];
    row[j - 1] = std::sqrt(dec.pi()(j)) / sqrt_pi_i * s;
  }
  return row;
}

double survival_from_kernel(const SpectralDecomposition& dec, std::size_t i,
                            const std::vector<double>& e) {
  double s = 0.0;
  for (std::size_t k = 0; k < dec.dim(); ++k) {
    s += e[k] * dec.v(i, k) * dec.v(1, k) / dec.thetas()[k];
  }
  return dec.mu1() * s / std::sqrt(dec.pi()(i));
}

}  // namespace

double transition_prob(const SpectralDecomposition& dec, FracOrder alpha, std::size_t i,
                       std::size_t j, double t) {
  check_state(dec, i);
  check_state(dec, j);
  const auto e = spectral_kernel(dec, alpha, t);
  double s = 0.0;
  for (std::size_t k = 0; k < dec.dim(); ++k) s += dec.v(i, k) * dec.v(j, k) * e[k];
  return std::sqrt(dec.pi()(j) / dec.pi()(i)) * s;
}

std::vector<double> transition_row(const SpectralDecomposition& dec, FracOrder alpha,
                                   std::size_t i, double t) {
  check_state(dec, i);
  return row_from_kernel(dec, i, spectral_kernel(dec, alpha, t));
}

double survival_prob(const SpectralDecomposition& dec, FracOrder alpha, std::size_t i, double t) {
  check_state(dec, i);
  return survival_from_kernel(dec, i, spectral_kernel(dec, alpha, t));
}

std::vector<double> survival_curve(const SpectralDecomposition& dec, FracOrder alpha,
                                   std::size_t i, const std::vector<double>& ts) {
  check_state(dec, i);
  for (double t : ts) check_time(t);
  std::vector<double> out(ts.size());
  const auto n = static_cast<long>(ts.size());
#pragma omp parallel for schedule(dynamic)
  for (long q = 0; q < n; ++q) {
    out[q] = survival_from_kernel(dec, i, spectral_kernel(dec, alpha, ts[q]));
  }
  return out;
}

std::vector<std::vector<double>> transition_rows(const SpectralDecomposition& dec,
                                                 FracOrder alpha, std::size_t i,
                                                 const std::vector<double>& ts) {
  check_state(dec, i);
  for (double t : ts) check_time(t);
  std::vector<std::vector<double>> out(ts.size());
  const auto n = static_cast<long>(ts.size());
#pragma omp parallel for schedule(dynamic)
  for (long q = 0; q < n; ++q) out[q] = row_from_kernel(dec, i, spectral_kernel(dec, alpha, ts[q]));
  return out;
}

DenseMatrix green_function(const GeneratorMatrix& gen) {
  const std::size_t m = gen.dim();
  DenseMatrix g;
  g.n = m;
  g.data.assign(m * m, 0.0);
  // Thomas algorithm on A = -Q: a_i sub, b_i diag, c_i super.
  std::vector<double> cp(m);
  std::vector<double> denom(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double b = -gen.diag[i];
    const double a = i > 0 ? -gen.sub[i - 1] : 0.0;
    const double c = i + 1 < m ? -gen.super[i] : 0.0;
    denom[i] = b - (i > 0 ? a * cp[i - 1] : 0.0);
    if (!(std::fabs(denom[i]) > 0.0) || !std::isfinite(denom[i])) {
      throw NumericalError("green_function: singular generator at row " + std::to_string(i + 1));
    }
    cp[i] = c / denom[i];
  }
  std::vector<double> y(m);
  for (std::size_t col = 0; col < m; ++col) {
    for (std::size_t i = 0; i < m; ++i) {
      const double rhs = (i == col) ? 1.0 : 0.0;
      const double a = i > 0 ? -gen.sub[i - 1] : 0.0;
      y[i] = (rhs - (i > 0 ? a * y[i - 1] : 0.0)) / denom[i];
    }
    for (std::size_t i = m - 1; i-- > 0;) y[i] -= cp[i] * y[i + 1];
    for (std::size_t i = 0; i < m; ++i) g.data[i * m + col] = y[i];
  }
  return g;
}

ThetaStarReport theta_star_report(const RateSchedule& rates, std::size_t m, Boundary boundary) {
  if (m < 2) throw DomainError("theta_star_report: M must be >= 2");
  ThetaStarReport r;
  r.m = m;
  r.theta1_m = decompose(rates, m, boundary).thetas().front();
  r.theta1_half = decompose(rates, m / 2, boundary).thetas().front();
  return r;
}

double forward_residual(const SpectralDecomposition& dec, const GeneratorMatrix& gen,
                        FracOrder alpha, std::size_t i, std::size_t j, double t, double h) {
  check_state(dec, i);
  if (j < 2 || j + 1 > dec.dim()) throw DomainError("forward_residual: j must be interior");
  if (!(h > 0.0) || !(t > h)) throw DomainError("forward_residual: need 0 < h < t");
  const auto n = static_cast<std::size_t>(std::llround(t / h));
  const double step = t / static_cast<double>(n);
  const double a = alpha.value();
  const double p0 = (i == j) ? 1.0 : 0.0;

  // Memory sum  sum_k w_k (p(t - k step) - p(0)),  w_k = (-1)^k binom(a, k).
  std::vector<double> values(n + 1);
  const auto count = static_cast<long>(n + 1);
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < count; ++k) {
    const double tk = t - static_cast<double>(k) * step;
    values[k] = (k == count - 1) ? p0 : transition_prob(dec, alpha, i, j, std::max(tk, 0.0));
  }
  double w = 1.0;
  double acc = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) w *= 1.0 - (a + 1.0) / static_cast<double>(k);
    acc += w * (values[k] - p0);
  }
  const double caputo = acc / std::pow(step, a);

  const auto row = transition_row(dec, alpha, i, t);
  const double rhs = gen.super[j - 2] * row[j - 2] + gen.diag[j - 1] * row[j - 1] +
                     gen.sub[j - 1] * row[j];
  return std::fabs(caputo - rhs);
}

}  // namespace fracbd
