#pragma once

// Counter-style seeded randomness for reproducible parallel trials. Every
// trial derives its own stream from (master seed, trial index) with integer
// mixing only, so results do not depend on scheduling or platform.

#include <cstdint>

namespace dirdec {

inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

class TrialRng {
  public:
    TrialRng(std::uint64_t master_seed, std::uint64_t stream)
        : state_(mix64(master_seed ^ mix64(stream + 0x9e3779b97f4a7c15ULL))) {}

    explicit TrialRng(std::uint64_t seed) : TrialRng(seed, 0) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // uniform integer in [0, bound), bound >= 1
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  private:
    std::uint64_t state_;
};

}  // namespace dirdec
