#pragma once

#include <cstdint>
#include <random>

namespace fracbd {

// Reproducible random stream keyed by (master_seed, stream_id).
//
// The engine is std::mt19937_64 seeded through std::seed_seq, both of which
// are fully specified by the standard, so a given key yields the same
// sequence on every conforming platform. Variates are derived from raw
// 64-bit output rather than <random> distributions, whose algorithms are
// implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  /// Unit-rate exponential variate.
  double exponential();

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace fracbd
