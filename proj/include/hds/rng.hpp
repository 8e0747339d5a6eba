#pragma once

// Seeded deterministic randomness. std::mt19937_64 has a fully specified
// sequence; the distribution helpers below avoid std::uniform_int_distribution,
// whose output is implementation-defined, so results are byte-identical
// across platforms.

#include <cstdint>
#include <random>
#include <stdexcept>

namespace hds {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  bool next_bit() { return (next_u64() & 1u) != 0; }

  // Uniform value in [0, bound) via masked rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("rng bound must be positive");
    if ((bound & (bound - 1)) == 0) return next_u64() & (bound - 1);
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      const std::uint64_t v = next_u64() & mask;
      if (v < bound) return v;
    }
  }

  std::uint32_t symbol(std::uint64_t alphabet_size) {
    return static_cast<std::uint32_t>(below(alphabet_size));
  }

  // Derive an independent child stream, e.g. one per parallel trial.
  Rng fork(std::uint64_t salt) {
    return Rng(next_u64() ^ (salt * 0x9e3779b97f4a7c15ull));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hds
