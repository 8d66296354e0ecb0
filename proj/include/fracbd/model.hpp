#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fracbd {

/// Birth rates lambda_i and death rates mu_i on {0, 1, 2, ...} with
/// lambda_0 = mu_0 = 0. Either linear (lambda_i = i lambda, mu_i = i mu) or
/// an explicit finite table.
class RateSchedule {
 public:
  static RateSchedule linear(double lambda, double mu);
  /// birth[0] and death[0] must be 0; all later entries positive, except
  /// that the final birth rate may be 0 (a reflecting top state).
  static RateSchedule table(std::vector<double> birth, std::vector<double> death);

  bool is_linear() const { return linear_; }
  double linear_lambda() const { return lambda_; }
  double linear_mu() const { return mu_; }

  /// Largest state with defined rates; nullopt for the unbounded linear case.
  std::optional<std::size_t> max_state() const;

  /// Throw DomainError when i exceeds the table.
  double birth(std::size_t i) const;
  double death(std::size_t i) const;

  std::string describe() const;

 private:
  RateSchedule() = default;

  bool linear_ = false;
  double lambda_ = 0.0;
  double mu_ = 0.0;
  std::vector<double> birth_;
  std::vector<double> death_;
};

/// Load a rate table from CSV with header `i,birth,death`; row 0 must be
/// `0,0,0` and indices must be consecutive.
RateSchedule load_rates_csv(const std::filesystem::path& path);
RateSchedule parse_rates_csv(const std::string& text);

/// Reversibility weights pi_1..pi_M (stored 0-based: values[n-1] = pi_n).
struct PiWeights {
  std::vector<double> values;

  double operator()(std::size_t n) const { return values.at(n - 1); }
  std::size_t size() const { return values.size(); }
};

/// pi_1 = 1, pi_{n+1} = pi_n lambda_n / mu_{n+1}. Products are accumulated
/// in log space when M exceeds 10^4.
PiWeights pi_weights(const RateSchedule& rates, std::size_t m);

struct StepProbs {
  double up;
  double down;
};

/// Jump probabilities of the embedded chain at state i >= 1.
StepProbs embedded_step_prob(const RateSchedule& rates, std::size_t i);

enum class SeriesStatus { convergent, diverged, undecided };

const char* to_string(SeriesStatus s);

struct SeriesValue {
  SeriesStatus status = SeriesStatus::undecided;
  double partial_sum = 0.0;  // sum of the terms examined
  double tail_bound = 0.0;   // estimated remainder when convergent
  std::size_t terms = 0;
};

/// The series A, B, C, D that govern absorption, mean absorption time and
/// coming down from infinity.
struct SeriesClassification {
  SeriesValue a;
  SeriesValue b;
  SeriesValue c;
  SeriesValue d;
  std::size_t terms_used = 0;
  double tolerance = 0.0;

  /// A = infinity. nullopt when A is undecided.
  std::optional<bool> absorbed_almost_surely() const;
  /// B < infinity.
  std::optional<bool> finite_mean_absorption() const;
  /// D < infinity.
  std::optional<bool> comes_down_from_infinity() const;
};

struct ClassifyOptions {
  double tolerance = 1e-8;
  std::size_t max_terms = 20000;
  /// Number of trailing terms inspected by the tail tests.
  std::size_t tail_window = 50;
};

SeriesClassification classify(const RateSchedule& rates,
                              const ClassifyOptions& opts = {});

enum class Boundary { reflect, absorb };

const char* to_string(Boundary b);
Boundary parse_boundary(const std::string& s);

/// Killed generator Q^(a) restricted to states 1..M, tridiagonal.
/// super[i] holds the rate i+1 -> i+2 (a birth), sub[i] the rate i+2 -> i+1
/// (a death), both 0-based; diag[i] is the diagonal of state i+1.
struct GeneratorMatrix {
  std::vector<double> diag;
  std::vector<double> super;
  std::vector<double> sub;
  Boundary boundary = Boundary::reflect;
  double killing = 0.0;  // mu_1, the rate from state 1 into 0

  std::size_t dim() const { return diag.size(); }
  /// Entry (i, j) with 1-based states.
  double at(std::size_t i, std::size_t j) const;
  double row_sum(std::size_t i) const;
};

GeneratorMatrix build_generator(const RateSchedule& rates, std::size_t m,
                                Boundary boundary = Boundary::reflect);

}  // namespace fracbd
