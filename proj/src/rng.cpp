#include "hpai/rng.hpp"

#include <cmath>
#include <numbers>

namespace hpai {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

std::uint64_t path_key(const NoiseStream& stream) {
  return mix64(mix64(stream.master_seed) ^ (stream.path_index * kGolden + 0x632be59bd9b4e019ULL));
}

std::uint64_t draw(std::uint64_t key, std::uint64_t counter) {
  return mix64(key ^ mix64(counter * kGolden + 0xd1b54a32d192ed03ULL));
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

WienerIncrement standard_normals(const NoiseStream& stream, std::uint64_t step) {
  const std::uint64_t key = path_key(stream);
  const std::uint64_t base = step * 6;
  WienerIncrement z{};
  // Box-Muller on three uniform pairs; the sixth normal is discarded.
  for (std::size_t pair = 0; pair < 3; ++pair) {
    const double u1 = (static_cast<double>(draw(key, base + 2 * pair) >> 11) + 1.0) * kTwoPow53Inv;
    const double u2 = static_cast<double>(draw(key, base + 2 * pair + 1) >> 11) * kTwoPow53Inv;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    z[2 * pair] = radius * std::cos(angle);
    if (2 * pair + 1 < kNoiseChannels) z[2 * pair + 1] = radius * std::sin(angle);
  }
  return z;
}

WienerIncrement wiener_increment(const NoiseStream& stream, std::uint64_t step, double dt) {
  const double scale = std::sqrt(dt);
  WienerIncrement dw = standard_normals(stream, step);
  for (auto& x : dw) x *= scale;
  return dw;
}

double SampleRng::uniform() { return static_cast<double>(engine_() >> 11) * kTwoPow53Inv; }

std::uint64_t SampleRng::below(std::uint64_t bound) {
  // Rejection keeps the result exactly uniform.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::vector<std::size_t> SampleRng::permutation(std::size_t n) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

}  // namespace hpai
