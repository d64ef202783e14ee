#pragma once

#include <array>
#include <cstdint>

namespace netred {

/// xoshiro256** seeded through SplitMix64.
///
/// A generator is identified by (seed, stream). Streams with the same seed are
/// statistically independent, which lets one experiment seed drive the graph,
/// the node coefficients and the clustering restarts without interference.
/// The bit stream is fully specified here so runs reproduce across platforms
/// and languages; nothing goes through <random> distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);

  /// Uniform integer in [0, bound) by rejection (bound > 0).
  std::uint64_t below(std::uint64_t bound);

  /// Child generator keyed by `stream`; does not advance this generator.
  Rng split(std::uint64_t stream) const;

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_;
  std::uint64_t stream_;
};

std::uint64_t splitmix64(std::uint64_t& x);

/// Stream ids used by the pipeline.
namespace streams {
inline constexpr std::uint64_t graph = 0;
inline constexpr std::uint64_t nodes = 1;
inline constexpr std::uint64_t clustering = 2;
}  // namespace streams

}  // namespace netred
