#pragma once

#include <cstdint>

namespace credal {

// Counter-based deterministic random stream. Each (seed, role) pair yields an
// independent stream; draws are indexed by an internal counter so that
// consumers with different roles never perturb each other.
class RandomStream {
 public:
  enum class Role : std::uint64_t {
    kEnvironment = 1,
    kSolverRestart = 2,
    kFuzz = 3,
    kAdversaryGrid = 4,
  };

  RandomStream(std::uint64_t seed, Role role)
      : state_(mix(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(role)))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).
  int next_index(int n) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace credal
