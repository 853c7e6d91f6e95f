#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "odl/scalar.hpp"

namespace odl {

std::uint64_t splitmix64(std::uint64_t& state);

/// Seed of the stream identified by (seed, experiment, trial). Streams are
/// independent of the order in which trials run.
std::uint64_t stream_seed(std::uint64_t seed, std::string_view experiment, std::uint64_t trial);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::string_view experiment, std::uint64_t trial)
      : engine_(stream_seed(seed, experiment, trial)) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform on [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Uniform dyadic rational k / 2^bits in [0, 1).
  Rational dyadic(int bits);
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace odl
