#pragma once

#include <cstddef>
#include <vector>

#include "fracbd/mlf.hpp"
#include "fracbd/model.hpp"

namespace fracbd {

/// Eigen-decomposition of the truncated killed generator on states 1..M.
///
/// With S = diag(sqrt(pi)) Q diag(sqrt(pi))^-1 symmetric and S = -V diag(theta) V^T,
///   Q_theta_k(j)  = v_jk / (sqrt(pi_j) v_1k)     birth-death polynomials
///   gamma_mass[k] = v_1k^2                        discrete spectral masses
/// so that pi_j sum_k Q_k(j) Q_k(j') gamma_mass[k] = delta_jj'.
class SpectralDecomposition {
 public:
  SpectralDecomposition(std::vector<double> thetas, std::vector<double> vectors,
                        PiWeights pi, double mu1, Boundary boundary);

  std::size_t dim() const { return thetas_.size(); }
  const std::vector<double>& thetas() const { return thetas_; }
  const PiWeights& pi() const { return pi_; }
  double mu1() const { return mu1_; }
  Boundary boundary() const { return boundary_; }

  /// Component i (1-based) of the k-th (0-based) orthonormal eigenvector of S.
  double v(std::size_t i, std::size_t k) const { return vectors_[k * dim() + (i - 1)]; }
  /// Q_theta_k(j), the polynomial at eigenvalue k, state j (1-based).
  double weight(std::size_t j, std::size_t k) const;
  double gamma_mass(std::size_t k) const;

  /// max_{j,j'} |sqrt(pi_j pi_j') sum_k Q_k(j) Q_k(j') gamma_k - delta_jj'|,
  /// the symmetric scaling of pi_j sum_k Q_k(j) Q_k(j') gamma_k = delta_jj'
  /// (the one-sided form amplifies rounding by sqrt(pi_j / pi_j')).
  double orthonormality_residual() const;

 private:
  std::vector<double> thetas_;
  std::vector<double> vectors_;
  PiWeights pi_;
  double mu1_;
  Boundary boundary_;
};

/// Throws NumericalError when the eigensolver does not converge.
SpectralDecomposition decompose(const GeneratorMatrix& gen, const PiWeights& pi);

/// Convenience: build_generator + pi_weights + decompose.
SpectralDecomposition decompose(const RateSchedule& rates, std::size_t m,
                                Boundary boundary = Boundary::reflect);

struct PolynomialTable {
  double theta = 0.0;
  std::vector<double> values;  // Q_theta(0..i_max)
};

/// Q(0) = 0, Q(1) = 1, lambda_i Q(i+1) = (lambda_i + mu_i - theta) Q(i) - mu_i Q(i-1).
PolynomialTable eval_polynomial(const RateSchedule& rates, double theta, std::size_t i_max);

/// E_a(-theta_k t^a) for every eigenvalue.
std::vector<double> spectral_kernel(const SpectralDecomposition& dec, FracOrder alpha, double t);

double transition_prob(const SpectralDecomposition& dec, FracOrder alpha, std::size_t i,
                       std::size_t j, double t);

/// p_{i,1..M}(t), 0-based by j-1.
std::vector<double> transition_row(const SpectralDecomposition& dec, FracOrder alpha,
                                   std::size_t i, double t);

/// P_i[T_0 > t] = mu_1 sum_k E_a(-theta_k t^a) Q_k(i) gamma_k / theta_k.
double survival_prob(const SpectralDecomposition& dec, FracOrder alpha, std::size_t i, double t);

/// Survival curve over a time grid; the grid is evaluated in parallel.
std::vector<double> survival_curve(const SpectralDecomposition& dec, FracOrder alpha,
                                   std::size_t i, const std::vector<double>& ts);

/// Transition rows over a time grid (rows[t_index][j-1]), parallel over t.
std::vector<std::vector<double>> transition_rows(const SpectralDecomposition& dec,
                                                 FracOrder alpha, std::size_t i,
                                                 const std::vector<double>& ts);

/// Dense row-major M x M matrix with 1-based access.
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  double operator()(std::size_t i, std::size_t j) const { return data[(i - 1) * n + (j - 1)]; }
  double& operator()(std::size_t i, std::size_t j) { return data[(i - 1) * n + (j - 1)]; }
};

/// (-Q)^-1 by one tridiagonal solve per column. Entry (i,j) is the expected
/// time spent in j before absorption, starting from i.
DenseMatrix green_function(const GeneratorMatrix& gen);

/// theta_1 at M and at M/2, the report used as a surrogate for theta*.
struct ThetaStarReport {
  double theta1_m = 0.0;
  double theta1_half = 0.0;
  std::size_t m = 0;
};

ThetaStarReport theta_star_report(const RateSchedule& rates, std::size_t m,
                                  Boundary boundary = Boundary::reflect);

/// Residual of the forward system at (i, j, t): the Grunwald-Letnikov
/// estimate of the Caputo derivative of p_ij with step h, minus
/// lambda_{j-1} p_{i,j-1} - (lambda_j + mu_j) p_ij + mu_{j+1} p_{i,j+1}.
/// Uses the full memory [0, t]; t / h is rounded to an integer.
double forward_residual(const SpectralDecomposition& dec, const GeneratorMatrix& gen,
                        FracOrder alpha, std::size_t i, std::size_t j, double t, double h);

}  // namespace fracbd
