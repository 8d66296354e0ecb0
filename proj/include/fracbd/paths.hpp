#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fracbd/mlf.hpp"
#include "fracbd/model.hpp"
#include "fracbd/rng.hpp"

namespace fracbd {

inline constexpr std::size_t kDefaultMaxJumps = 10'000'000;

/// One trajectory of the Markov renewal representation.
/// epochs[k] is the time of the jump into states[k]; epochs[0] = 0.
struct PathSample {
  std::vector<std::size_t> states;
  std::vector<double> epochs;
  bool absorbed = false;
  double final_time = 0.0;  // horizon, or the absorption epoch

  /// State occupied at time t in [0, final_time].
  std::size_t state_at(double t) const;
};

/// Mittag-Leffler holding times with rate lambda_x + mu_x and embedded-chain
/// jumps until absorption or until the next epoch passes the horizon.
/// More than max_jumps jumps is a ResourceError.
PathSample simulate_renewal(const RateSchedule& rates, FracOrder alpha, std::size_t i0,
                            double horizon, RngStream& rng,
                            std::size_t max_jumps = kDefaultMaxJumps);

/// Same law as simulate_renewal(...).state_at(t) without storing the path.
std::size_t renewal_state_at(const RateSchedule& rates, FracOrder alpha, std::size_t i0,
                             double t, RngStream& rng,
                             std::size_t max_jumps = kDefaultMaxJumps);

/// N_1(E(t)): one draw of the inverse subordinator, then the classical chain
/// run lazily up to that operational time.
std::size_t simulate_timechange_marginal(const RateSchedule& rates, FracOrder alpha,
                                         std::size_t i0, double t, RngStream& rng,
                                         std::size_t max_jumps = kDefaultMaxJumps);

/// States at sorted query times along one classical path composed with one
/// grid-inverted subordinator (step grid_delta). For a == 1 the clock is the
/// identity and no grid is drawn.
std::vector<std::size_t> simulate_timechange_path(const RateSchedule& rates, FracOrder alpha,
                                                  std::size_t i0,
                                                  const std::vector<double>& query_times,
                                                  double grid_delta, RngStream& rng,
                                                  std::size_t max_jumps = kDefaultMaxJumps);

enum class SimMethod { renewal, timechange, timechange_grid };

const char* to_string(SimMethod m);
SimMethod parse_sim_method(const std::string& s);

enum class PmfSource { renewal, timechange, spectral, closed_form };

const char* to_string(PmfSource s);

/// Distribution over states 0..max at a fixed time. mass[j] is P[N(t) = j].
struct MarginalPmf {
  double time = 0.0;
  std::vector<double> mass;
  std::vector<double> std_err;  // binomial standard errors; zeros for exact sources
  std::size_t n_paths = 0;      // kept paths; 0 for exact sources
  std::size_t discarded = 0;    // paths dropped at the jump cap
  PmfSource source = PmfSource::closed_form;

  double at(std::size_t j) const { return j < mass.size() ? mass[j] : 0.0; }
  double se_at(std::size_t j) const { return j < std_err.size() ? std_err[j] : 0.0; }
};

struct EstimateOptions {
  std::size_t max_jumps = kDefaultMaxJumps;
  double grid_delta = 1e-3;  // used by SimMethod::timechange_grid only
};

/// Monte Carlo pmf; path p uses RngStream(seed, p). Paths run in parallel
/// (OpenMP) and are reduced in path order, so the result does not depend on
/// the number of threads.
MarginalPmf estimate_pmf(SimMethod method, const RateSchedule& rates, FracOrder alpha,
                         std::size_t i0, double t, std::size_t n_paths, std::uint64_t seed,
                         const EstimateOptions& opts = {});

/// Single-threaded reference with identical output.
MarginalPmf estimate_pmf_serial(SimMethod method, const RateSchedule& rates, FracOrder alpha,
                                std::size_t i0, double t, std::size_t n_paths,
                                std::uint64_t seed, const EstimateOptions& opts = {});

/// Total variation distance between two pmfs over states 0..max(sizes).
double total_variation(const MarginalPmf& a, const MarginalPmf& b);

/// Kolmogorov-Smirnov distance between the CDFs of two pmfs.
double ks_distance(const MarginalPmf& a, const MarginalPmf& b);

namespace detail {

/// Final state of one path; SIZE_MAX when discarded at the jump cap.
std::size_t draw_state(SimMethod method, const RateSchedule& rates, FracOrder alpha,
                       std::size_t i0, double t, std::uint64_t seed, std::uint64_t path,
                       const EstimateOptions& opts);

MarginalPmf tally(const std::vector<std::size_t>& states, double t, PmfSource source);

}  // namespace detail

}  // namespace fracbd
