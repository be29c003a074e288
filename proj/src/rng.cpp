#include "aoisim/rng.hpp"

#include <stdexcept>

namespace aoisim {

std::size_t Rng::UniformIndex(std::size_t n) {
  if (n == 0) throw std::invalid_argument("UniformIndex: empty range");
  const std::uint64_t range = n;
  // Rejection sampling on the top of the 64-bit range removes modulo bias.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return static_cast<std::size_t>(draw % range);
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t StreamSeed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64(SplitMix64(seed) ^ SplitMix64(stream + 0x5851F42D4C957F2DULL));
}

}  // namespace aoisim
