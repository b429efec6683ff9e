#include "exitwalk/rng.hpp"

#include <array>

namespace exitwalk {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng Rng::for_replica(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x6578u};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return Rng((static_cast<std::uint64_t>(words[0]) << 32) | words[1]);
}

double Rng::uniform() {
  // 53 random bits mapped to (0, 1]
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double Rng::normal() { return normal_(engine_); }

bool Rng::coin() { return (engine_() >> 63) != 0; }

}  // namespace exitwalk
