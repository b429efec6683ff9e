#pragma once

#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>

namespace exitwalk {

/// Caller-owned random stream. Not safe to share between threads; batch
/// runs derive one stream per replica with for_replica().
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Stream for replica `index` of a batch seeded with `seed`. Depends only
  /// on (seed, index).
  static Rng for_replica(std::uint64_t seed, std::uint64_t index);

  /// Uniform on (0, 1].
  double uniform();
  double normal();
  /// Fair coin.
  bool coin();

 private:
  std::mt19937_64 engine_;
  // Ziggurat sampler; keeps no state between draws.
  boost::random::normal_distribution<double> normal_;
};

}  // namespace exitwalk
