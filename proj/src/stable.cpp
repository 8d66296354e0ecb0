#include "fracbd/stable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fracbd/errors.hpp"

namespace fracbd {

double sample_stable(FracOrder order, RngStream& rng) {
  const double a = order.value();
  if (order.is_classical()) return 1.0;
  // Kanter's representation: with U uniform on (0, pi) and W ~ Exp(1),
  //   S = sin(a U) / sin(U)^(1/a) * (sin((1-a) U) / W)^((1-a)/a).
  const double u = std::numbers::pi * rng.uniform();
  const double w = rng.exponential();
  const double head = std::sin(a * u) / std::pow(std::sin(u), 1.0 / a);
  const double tail = std::pow(std::sin((1.0 - a) * u) / w, (1.0 - a) / a);
  return head * tail;
}

double sample_inverse_at(FracOrder order, double t, RngStream& rng) {
  if (!(t >= 0.0)) throw DomainError("sample_inverse_at: t must be nonnegative");
  if (t == 0.0) return 0.0;
  if (order.is_classical()) return t;
  const double s = sample_stable(order, rng);
  return std::pow(t / s, order.value());
}

double sample_ml_waiting(FracOrder order, double rate, RngStream& rng) {
  if (!(rate > 0.0)) throw DomainError("sample_ml_waiting: rate must be positive");
  const double x = rng.exponential() / rate;
  if (order.is_classical()) return x;
  return std::pow(x, 1.0 / order.value()) * sample_stable(order, rng);
}

SubordinatorGrid::SubordinatorGrid(double step, double horizon,
                                   std::vector<double> values)
    : step_(step), horizon_(horizon), values_(std::move(values)) {
  if (values_.empty() || values_.front() != 0.0 || !(values_.back() > horizon_)) {
    throw DomainError("SubordinatorGrid: values must start at 0 and end above the horizon");
  }
}

double SubordinatorGrid::invert(double t) const {
  if (!(t >= 0.0) || t > horizon_) {
    throw DomainError("invert_grid: t=" + std::to_string(t) +
                      " outside [0, horizon=" + std::to_string(horizon_) + "]");
  }
  const auto it = std::upper_bound(values_.begin(), values_.end(), t);
  return step_ * static_cast<double>(it - values_.begin());
}

SubordinatorGrid build_grid(FracOrder order, double step, double horizon,
                            RngStream& rng, std::size_t max_steps) {
  if (!(step > 0.0)) throw DomainError("build_grid: step must be positive");
  if (!(horizon > 0.0)) throw DomainError("build_grid: horizon must be positive");
  const double scale = std::pow(step, 1.0 / order.value());
  std::vector<double> values{0.0};
  double d = 0.0;
  while (d <= horizon) {
    if (values.size() > max_steps) {
      throw ResourceError("build_grid: more than " + std::to_string(max_steps) +
                          " steps needed to cover the horizon");
    }
    d += scale * sample_stable(order, rng);
    values.push_back(d);
  }
  return SubordinatorGrid(step, horizon, std::move(values));
}

}  // namespace fracbd
