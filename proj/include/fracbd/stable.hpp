#pragma once

#include <cstddef>
#include <vector>

#include "fracbd/mlf.hpp"
#include "fracbd/rng.hpp"

namespace fracbd {

/// Standard one-sided a-stable variate S, E[exp(-s S)] = exp(-s^a).
/// Returns exactly 1 for a == 1.
double sample_stable(FracOrder alpha, RngStream& rng);

/// One draw of the inverse stable subordinator E(t) = inf{r : D(r) > t},
/// via self-similarity E(t) = (t / S)^a. E(0) = 0; a == 1 gives t.
double sample_inverse_at(FracOrder alpha, double t, RngStream& rng);

/// Waiting time T with P[T > t] = E_a(-rate t^a), built as X^(1/a) S with
/// X ~ Exp(rate). For a == 1 this is X.
double sample_ml_waiting(FracOrder alpha, double rate, RngStream& rng);

inline constexpr std::size_t kDefaultGridStepCap = 100'000'000;

/// Stable subordinator D sampled on the operational grid 0, d, 2d, ...
/// until it first exceeds the horizon.
class SubordinatorGrid {
 public:
  SubordinatorGrid(double step, double horizon, std::vector<double> values);

  double step() const { return step_; }
  double horizon() const { return horizon_; }
  const std::vector<double>& values() const { return values_; }

  /// step * min{k : D_k > t}; nondecreasing in t. Throws DomainError for t
  /// outside [0, horizon].
  double invert(double t) const;

 private:
  double step_;
  double horizon_;
  std::vector<double> values_;
};

/// Cumulative sums of i.i.d. increments step^(1/a) S_k, stopping at the
/// first value above the horizon. More than max_steps increments is a
/// ResourceError.
SubordinatorGrid build_grid(FracOrder alpha, double step, double horizon,
                            RngStream& rng,
                            std::size_t max_steps = kDefaultGridStepCap);

inline double invert_grid(const SubordinatorGrid& grid, double t) {
  return grid.invert(t);
}

}  // namespace fracbd
