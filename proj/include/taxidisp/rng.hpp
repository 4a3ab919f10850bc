#pragma once

#include <cstdint>
#include <random>

namespace taxidisp {

/// Seedable random source with a portable bit stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The library distributions are implementation-defined, so the
/// transforms below are written out here:
///   uniform01  : top 53 bits of one engine draw, scaled by 2^-53, in [0, 1)
///   normal     : Marsaglia polar method on uniform01, caching the spare deviate
/// Named sub-streams are derived with SplitMix64 so that, for example, the
/// demand realization of a seed does not depend on how many draws the fleet
/// placement consumed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent generator for a named purpose under the same seed.
  static Rng stream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64() { return engine_(); }
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal(double mean, double sigma);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Stream ids used by the simulator.
enum RngStream : std::uint64_t {
  kDemandStream = 0x64656d616e64ULL,  // "demand"
  kFleetStream = 0x666c656574ULL,     // "fleet"
};

}  // namespace taxidisp
