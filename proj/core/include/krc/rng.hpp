#ifndef KRC_RNG_HPP
#define KRC_RNG_HPP

#include <cstdint>
#include <random>

namespace krc {

/// SplitMix64 step; used to derive independent sub-seeds from one user seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Two independent generator streams derived from one seed. Stream-splitting
/// rule: sub-seeds are consecutive SplitMix64 outputs of the user seed, so
/// the uniforms fed to the inverse CDF are independent of the (omega, x)
/// draws by construction.
struct SplitRng {
  std::mt19937_64 pair_stream;     // draws (omega, x) from the joint law
  std::mt19937_64 uniform_stream;  // draws the auxiliary uniform U

  explicit SplitRng(std::uint64_t seed) {
    std::uint64_t state = seed;
    pair_stream.seed(splitmix64(state));
    uniform_stream.seed(splitmix64(state));
  }
};

/// 53-bit uniform in [0, 1); bit-for-bit reproducible across platforms,
/// unlike std::uniform_real_distribution.
inline double next_uniform(std::mt19937_64& gen) {
  return double(gen() >> 11) * 0x1.0p-53;
}

}  // namespace krc

#endif  // KRC_RNG_HPP
