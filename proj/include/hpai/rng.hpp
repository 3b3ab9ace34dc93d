#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace hpai {

/// Identifies the Wiener increments of one sample path. Increments are a pure
/// function of (master_seed, path_index, step, dt), so paths can be generated
/// in any order or on any thread and still reproduce bit-for-bit.
struct NoiseStream {
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
};

// Increments for (S, E, I_s, I_a, B), in that order.
inline constexpr std::size_t kNoiseChannels = 5;
using WienerIncrement = std::array<double, kNoiseChannels>;

// Five independent N(0, 1) draws for one step of one path.
WienerIncrement standard_normals(const NoiseStream& stream, std::uint64_t step);

// Five independent N(0, dt) draws: sqrt(dt) * standard_normals.
WienerIncrement wiener_increment(const NoiseStream& stream, std::uint64_t step, double dt);

// SplitMix64 finaliser; exposed for seed derivation elsewhere.
std::uint64_t mix64(std::uint64_t x);

/// Sequential generator for sampling designs (LHS strata, permutations).
/// Uses only the standard-specified mt19937_64 output sequence so draws
/// do not depend on the standard library's distribution implementations.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : engine_(mix64(seed)) {}

  // Uniform on [0, 1).
  double uniform();
  // Uniform integer on [0, bound).
  std::uint64_t below(std::uint64_t bound);
  // Fisher-Yates permutation of 0..n-1.
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace hpai
