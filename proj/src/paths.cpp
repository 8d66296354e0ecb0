#include "fracbd/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracbd/errors.hpp"
#include "fracbd/stable.hpp"

namespace fracbd {

namespace {

constexpr std::size_t kDiscarded = std::numeric_limits<std::size_t>::max();

void check_start(std::size_t i0) {
  if (i0 < 1) throw DomainError("initial state must be >= 1");
}

[[noreturn]] void jump_cap(std::size_t max_jumps) {
  throw ResourceError("path exceeded " + std::to_string(max_jumps) + " jumps");
}

// One step of the embedded chain out of x >= 1.
std::size_t next_state(const RateSchedule& rates, std::size_t x, RngStream& rng) {
  const StepProbs p = embedded_step_prob(rates, x);
  return rng.uniform() < p.up ? x + 1 : x - 1;
}

// Classical (a = 1) chain, advanced lazily across increasing operational times.
class ClassicalRunner {
 public:
  ClassicalRunner(const RateSchedule& rates, std::size_t i0, RngStream& rng,
                  std::size_t max_jumps)
      : rates_(rates), rng_(rng), max_jumps_(max_jumps), state_(i0) {}

  std::size_t advance_to(double u) {
    while (state_ != 0) {
      if (!pending_) {
        const double rate = rates_.birth(state_) + rates_.death(state_);
        next_epoch_ = clock_ + rng_.exponential() / rate;
        pending_ = true;
      }
      if (next_epoch_ > u) break;
      if (++jumps_ > max_jumps_) jump_cap(max_jumps_);
      clock_ = next_epoch_;
      pending_ = false;
      state_ = next_state(rates_, state_, rng_);
    }
    return state_;
  }

 private:
  const RateSchedule& rates_;
  RngStream& rng_;
  std::size_t max_jumps_;
  std::size_t state_;
  std::size_t jumps_ = 0;
  double clock_ = 0.0;
  double next_epoch_ = 0.0;
  bool pending_ = false;
};

}  // namespace

std::size_t PathSample::state_at(double t) const {
  if (!(t >= 0.0) || t > final_time) throw DomainError("PathSample::state_at: t outside path");
  const auto it = std::upper_bound(epochs.begin(), epochs.end(), t);
  return states[static_cast<std::size_t>(it - epochs.begin()) - 1];
}

PathSample simulate_renewal(const RateSchedule& rates, FracOrder alpha, std::size_t i0,
                            double horizon, RngStream& rng, std::size_t max_jumps) {
  check_start(i0);
  if (!(horizon > 0.0)) throw DomainError("simulate_renewal: horizon must be positive");
  PathSample path;
  path.states.push_back(i0);
  path.epochs.push_back(0.0);
  std::size_t x = i0;
  double clock = 0.0;
  while (true) {
    const double w = sample_ml_waiting(alpha, rates.birth(x) + rates.death(x), rng);
    if (clock + w > horizon) {
      path.final_time = horizon;
      return path;
    }
    if (path.states.size() > max_jumps) jump_cap(max_jumps);
    clock += w;
    x = next_state(rates, x, rng);
    path.states.push_back(x);
    path.epochs.push_back(clock);
    if (x == 0) {
      path.absorbed = true;
      path.final_time = clock;
      return path;
    }
  }
}

std::size_t renewal_state_at(const RateSchedule& rates, FracOrder alpha, std::size_t i0,
                             double t, RngStream& rng, std::size_t max_jumps) {
  check_start(i0);
  if (!(t >= 0.0)) throw DomainError("renewal_state_at: t must be >= 0");
  std::size_t x = i0;
  double clock = 0.0;
  std::size_t jumps = 0;
  while (x != 0) {
    const double w = sample_ml_waiting(alpha, rates.birth(x) + rates.death(x), rng);
    if (clock + w > t) break;
    if (++jumps > max_jumps) jump_cap(max_jumps);
    clock += w;
    x = next_state(rates, x, rng);
  }
  return x;
}

std::size_t simulate_timechange_marginal(const RateSchedule& rates, FracOrder alpha,
                                         std::size_t i0, double t, RngStream& rng,
                                         std::size_t max_jumps) {
  check_start(i0);
  if (!(t >= 0.0)) throw DomainError("simulate_timechange_marginal: t must be >= 0");
  const double u = sample_inverse_at(alpha, t, rng);
  ClassicalRunner runner(rates, i0, rng, max_jumps);
  return runner.advance_to(u);
}

std::vector<std::size_t> simulate_timechange_path(const RateSchedule& rates, FracOrder alpha,
                                                  std::size_t i0,
                                                  const std::vector<double>& query_times,
                                                  double grid_delta, RngStream& rng,
                                                  std::size_t max_jumps) {
  check_start(i0);
  if (query_times.empty()) return {};
  if (!std::is_sorted(query_times.begin(), query_times.end()) || !(query_times.front() >= 0.0)) {
    throw DomainError("simulate_timechange_path: query times must be sorted and >= 0");
  }
  std::vector<double> ops(query_times.size());
  if (alpha.is_classical()) {
    ops = query_times;
  } else {
    const double horizon = std::max(query_times.back(), std::numeric_limits<double>::min());
    const SubordinatorGrid grid = build_grid(alpha, grid_delta, horizon, rng);
    for (std::size_t q = 0; q < ops.size(); ++q) ops[q] = grid.invert(query_times[q]);
  }
  ClassicalRunner runner(rates, i0, rng, max_jumps);
  std::vector<std::size_t> out(ops.size());
  for (std::size_t q = 0; q < ops.size(); ++q) out[q] = runner.advance_to(ops[q]);
  return out;
}

const char* to_string(SimMethod m) {
  switch (m) {
    case SimMethod::renewal: return "renewal";
    case SimMethod::timechange: return "timechange";
    case SimMethod::timechange_grid: return "timechange-grid";
  }
  return "?";
}

SimMethod parse_sim_method(const std::string& s) {
  if (s == "renewal") return SimMethod::renewal;
  if (s == "timechange") return SimMethod::timechange;
  if (s == "timechange-grid") return SimMethod::timechange_grid;
  throw DomainError("unknown method '" + s + "' (expected renewal|timechange|timechange-grid)");
}

const char* to_string(PmfSource s) {
  switch (s) {
    case PmfSource::renewal: return "renewal";
    case PmfSource::timechange: return "timechange";
    case PmfSource::spectral: return "spectral";
    case PmfSource::closed_form: return "closed_form";
  }
  return "?";
}

namespace detail {

std::size_t draw_state(SimMethod method, const RateSchedule& rates, FracOrder alpha,
                       std::size_t i0, double t, std::uint64_t seed, std::uint64_t path,
                       const EstimateOptions& opts) {
  RngStream rng(seed, path);
  try {
    switch (method) {
      case SimMethod::renewal:
        return renewal_state_at(rates, alpha, i0, t, rng, opts.max_jumps);
      case SimMethod::timechange:
        return simulate_timechange_marginal(rates, alpha, i0, t, rng, opts.max_jumps);
      case SimMethod::timechange_grid:
        return simulate_timechange_path(rates, alpha, i0, {t}, opts.grid_delta, rng,
                                        opts.max_jumps)
            .front();
    }
  } catch (const ResourceError&) {
    return kDiscarded;
  }
  return kDiscarded;
}

MarginalPmf tally(const std::vector<std::size_t>& states, double t, PmfSource source) {
  MarginalPmf pmf;
  pmf.time = t;
  pmf.source = source;
  std::vector<std::size_t> counts;
  for (std::size_t s : states) {
    if (s == kDiscarded) {
      ++pmf.discarded;
      continue;
    }
    if (s >= counts.size()) counts.resize(s + 1, 0);
    ++counts[s];
    ++pmf.n_paths;
  }
  pmf.mass.resize(counts.size());
  pmf.std_err.resize(counts.size());
  if (pmf.n_paths == 0) return pmf;
  const double n = static_cast<double>(pmf.n_paths);
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const double p = static_cast<double>(counts[j]) / n;
    pmf.mass[j] = p;
    pmf.std_err[j] = std::sqrt(p * (1.0 - p) / n);
  }
  return pmf;
}

}  // namespace detail

namespace {

PmfSource source_of(SimMethod m) {
  return m == SimMethod::renewal ? PmfSource::renewal : PmfSource::timechange;
}

void check_estimate_args(std::size_t i0, double t, std::size_t n_paths) {
  check_start(i0);
  if (!(t >= 0.0)) throw DomainError("estimate_pmf: t must be >= 0");
  if (n_paths < 1) throw DomainError("estimate_pmf: n_paths must be >= 1");
}

}  // namespace

MarginalPmf estimate_pmf(SimMethod method, const RateSchedule& rates, FracOrder alpha,
                         std::size_t i0, double t, std::size_t n_paths, std::uint64_t seed,
                         const EstimateOptions& opts) {
  check_estimate_args(i0, t, n_paths);
  std::vector<std::size_t> states(n_paths);
  const auto n = static_cast<long long>(n_paths);
  // Exceptions other than the jump cap (e.g. a table too short) must not
  // escape the parallel region; capture the first one and rethrow.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 256)
  for (long long p = 0; p < n; ++p) {
    try {
      states[p] = detail::draw_state(method, rates, alpha, i0, t, seed,
                                     static_cast<std::uint64_t>(p), opts);
    } catch (...) {
#pragma omp critical(fracbd_estimate_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return detail::tally(states, t, source_of(method));
}

double total_variation(const MarginalPmf& a, const MarginalPmf& b) {
  const std::size_t n = std::max(a.mass.size(), b.mass.size());
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += std::fabs(a.at(j) - b.at(j));
  return 0.5 * s;
}

double ks_distance(const MarginalPmf& a, const MarginalPmf& b) {
  const std::size_t n = std::max(a.mass.size(), b.mass.size());
  double ca = 0.0;
  double cb = 0.0;
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    ca += a.at(j);
    cb += b.at(j);
    worst = std::max(worst, std::fabs(ca - cb));
  }
  return worst;
}

}  // namespace fracbd
