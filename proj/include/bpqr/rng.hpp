#pragma once

#include <cstdint>
#include <random>

namespace bpqr {

/// splitmix64 finalizer, used to derive well-separated seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

/// Seeded pseudo-random stream. Equal seeds give identical sequences.
///
/// Substreams are derived deterministically from (seed, label...) through
/// splitmix64 mixing, so per-individual or per-chain streams can be created
/// without sharing state.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0);

  std::uint64_t seed() const noexcept { return seed_; }

  RngStream substream(std::uint64_t label) const;
  RngStream substream(std::uint64_t label_a, std::uint64_t label_b) const;

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  /// Exponential with rate 1.
  double exponential();
  /// Gamma with the given shape and unit rate.
  double gamma(double shape);
  /// Discrete uniform on {lo, ..., hi}.
  long uniform_int(long lo, long hi);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace bpqr
