#include "bpqr/rng.hpp"

#include <cmath>

namespace bpqr {

std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(mix_seed(seed)) {}

RngStream RngStream::substream(std::uint64_t label) const {
  return RngStream(mix_seed(seed_ ^ mix_seed(label + 0x5851F42D4C957F2DULL)));
}

RngStream RngStream::substream(std::uint64_t label_a, std::uint64_t label_b) const {
  return substream(label_a).substream(label_b);
}

double RngStream::uniform() {
  // 53 random bits mapped to the open interval (0, 1).
  for (;;) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

double RngStream::normal() { return normal_(engine_); }

double RngStream::exponential() { return -std::log(uniform()); }

double RngStream::gamma(double shape) {
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_);
}

long RngStream::uniform_int(long lo, long hi) {
  std::uniform_int_distribution<long> dist(lo, hi);
  return dist(engine_);
}

}  // namespace bpqr
