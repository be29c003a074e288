#ifndef AOISIM_RNG_HPP_
#define AOISIM_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>

namespace aoisim {

// Seeded random source. Draws are built directly on the 64-bit engine output
// so that a given seed yields the same stream with any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform double in [0, 1) with 53 bits of precision.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  // Uniform integer in [0, n). n must be positive.
  std::size_t UniformIndex(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t SplitMix64(std::uint64_t x);

// Independent child seed for stream `stream` of a run seeded with `seed`.
std::uint64_t StreamSeed(std::uint64_t seed, std::uint64_t stream);

}  // namespace aoisim

#endif  // AOISIM_RNG_HPP_
