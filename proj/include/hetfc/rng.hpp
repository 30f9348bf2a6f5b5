#pragma once

#include <cstdint>

namespace hetfc {

// One SplitMix64 step. Also the mixing primitive behind RngStream::derive.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256++ stream with value semantics. Each worker / replication owns
// its own stream; streams are never shared across threads.
//
// Stream derivation is counter-based: derive(master, index) runs SplitMix64
// from the state master XOR (index+1)*0x9E3779B97F4A7C15 and uses four
// outputs as the xoshiro state. For a fixed master seed the map from index
// to initial state is injective, so replications get disjoint streams that
// do not depend on worker scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  static RngStream derive(std::uint64_t master_seed, std::uint64_t index);
  // Deterministic 64-bit mix of (seed, index); used to build per-cell and
  // per-purpose sub-seeds from one master seed.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1]; safe under log().
  double uniform_open();
  // Standard normal via Box-Muller (exact law; second value cached).
  double normal();
  // Gamma(shape, 1) via Marsaglia-Tsang, any shape > 0.
  double gamma(double shape);

 private:
  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace hetfc
