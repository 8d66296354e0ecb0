#include "fracbd/errors.hpp"
#include "fracbd/paths.hpp"

namespace fracbd {

MarginalPmf estimate_pmf_serial(SimMethod method, const RateSchedule& rates, FracOrder alpha,
                                std::size_t i0, double t, std::size_t n_paths,
                                std::uint64_t seed, const EstimateOptions& opts) {
  if (i0 < 1) throw DomainError("initial state must be >= 1");
  if (!(t >= 0.0)) throw DomainError("estimate_pmf: t must be >= 0");
  if (n_paths < 1) throw DomainError("estimate_pmf: n_paths must be >= 1");
  std::vector<std::size_t> states(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) {
    states[p] = detail::draw_state(method, rates, alpha, i0, t, seed, p, opts);
  }
  return detail::tally(states, t,
                       method == SimMethod::renewal ? PmfSource::renewal : PmfSource::timechange);
}

}  // namespace fracbd
