#pragma once

#include <cstdint>

namespace edlf {

// splitmix64: tiny, fast, reproducible across platforms. Supplies every
// seeded double stream (random init, test generators); results must not
// depend on the standard library's distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [a, b)
    double uniform(double a, double b) { return a + (b - a) * next_double(); }

  private:
    std::uint64_t state_;
};

}  // namespace edlf
