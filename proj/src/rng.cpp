#include "odl/rng.hpp"

#include "odl/error.hpp"

namespace odl {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::string_view experiment, std::uint64_t trial) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : experiment) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t state = seed;
  std::uint64_t out = splitmix64(state);
  state ^= h;
  out ^= splitmix64(state);
  state ^= trial * 0xd1342543de82ef95ULL;
  out ^= splitmix64(state);
  return out;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) raise(Errc::InvalidArgument, "empty integer range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == ~std::uint64_t(0)) return static_cast<std::int64_t>(engine_());
  const std::uint64_t range = span + 1;
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % range);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % range);
}

Rational Rng::dyadic(int bits) {
  if (bits < 1) raise(Errc::InvalidArgument, "dyadic needs at least one bit");
  Integer num = 0;
  int left = bits;
  while (left > 0) {
    const int take = left >= 32 ? 32 : left;
    num <<= take;
    num += static_cast<unsigned long>(engine_() >> (64 - take));
    left -= take;
  }
  Integer den = 1;
  den <<= bits;
  return make_rational(num, den);
}

}  // namespace odl
