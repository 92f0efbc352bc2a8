#pragma once

#include <cstdint>
#include <random>

namespace schottky {

// Seeded generator with hand-rolled distributions so that streams are
// identical across platforms and standard library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double uniform() { return (engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return n ? engine_() % n : 0; }

    // log-uniform in [lo, hi], lo > 0
    double log_uniform(double lo, double hi);

private:
    std::mt19937_64 engine_;
};

} // namespace schottky
