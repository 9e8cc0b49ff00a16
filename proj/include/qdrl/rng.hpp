#pragma once

#include <cstdint>
#include <random>

namespace qdrl {

// splitmix64 finalizer; used to derive independent sub-stream seeds from a
// root seed so that consumers (env resets, action sampling, parameter init)
// cannot perturb each other's draw sequences.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t sub_seed(std::uint64_t root, std::uint64_t tag) {
    return mix_seed(root ^ mix_seed(tag));
}

// Deterministic RNG. The mt19937_64 bit stream is fully specified by the
// standard; the real-valued draws below are hand-rolled because the
// <random> distributions are implementation-defined and would break
// bit-for-bit reproducibility across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1), 53-bit resolution
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // uniform strictly inside (0, 1)
    double uniform01_open() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double uniform_open(double lo, double hi) {
        return lo + (hi - lo) * uniform01_open();
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace qdrl
