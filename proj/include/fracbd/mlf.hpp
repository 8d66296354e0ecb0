#pragma once

// One-parameter Mittag-Leffler function E_a(x) = sum_k x^k / Gamma(a k + 1)
// on the real line, together with the survival kernel E_a(-theta t^a) used
// by every fractional quantity in this library.

namespace fracbd {

/// Fractional order a in (0, 1]. a == 1 is the classical (exponential) case.
class FracOrder {
 public:
  explicit FracOrder(double alpha);

  double value() const { return alpha_; }
  bool is_classical() const { return alpha_ == 1.0; }

 private:
  double alpha_;
};

/// Evaluation strategy for ml_eval.
///
/// |x| <= series_threshold       power series, compensated summation
/// |x| >= asym_threshold         algebraic asymptotic expansion, truncated at
///                               its smallest term (at most asym_terms terms),
///                               used only when that term meets target_rel_err
/// otherwise                     positive-integrand integral representation
///                               on a finite interval (tanh-sinh quadrature)
struct MlEvalConfig {
  double series_threshold = 1.0;
  double asym_threshold = 40.0;
  int asym_terms = 60;
  double target_rel_err = 1e-10;

  void validate() const;
};

/// 1 / Gamma(z), defined as exactly 0 at z = 0, -1, -2, ...
double reciprocal_gamma(double z);

/// E_a(x). Negative axis: full support. Positive axis: only while
/// x^(1/a) <= 700 (otherwise UnsupportedDomain).
double ml_eval(FracOrder alpha, double x, const MlEvalConfig& cfg = {});

/// E_a(-theta t^a), the survival function of a Mittag-Leffler waiting time.
double ml_survival(FracOrder alpha, double theta, double t,
                   const MlEvalConfig& cfg = {});

/// Partial sum  sum_{m=1}^{n_terms} -(-x)^(-m) / Gamma(1 - m a),  x = theta t^a,
/// of the large-argument expansion of E_a(-x). Throws AccuracyError when x is
/// below cfg.asym_threshold.
double ml_tail_expansion(FracOrder alpha, double theta, double t, int n_terms,
                         const MlEvalConfig& cfg = {});

struct QuadConfig {
  double rel_tol = 1e-12;
  /// The integration range [0, T] is cut where exp(-s T) / s drops below this.
  double truncation_tol = 1e-15;
};

struct LaplaceCheck {
  double residual = 0.0;      // |quadrature - s^(a-1) / (s^a + theta)|
  double quad_error = 0.0;    // quadrature error estimate incl. truncated tail
  double numeric = 0.0;
  double exact = 0.0;
  bool converged = false;
};

/// Self-test of the transform  int_0^inf e^{-s t} E_a(-theta t^a) dt
/// = s^(a-1) / (s^a + theta). Non-convergence is reported, not thrown.
LaplaceCheck ml_laplace_residual(FracOrder alpha, double theta, double s,
                                 const QuadConfig& quad = {},
                                 const MlEvalConfig& cfg = {});

}  // namespace fracbd
