#pragma once

#include <cstdint>
#include <random>

namespace tailbound {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stream derived deterministically from (seed, trial index): serial and
// parallel schedules see identical draws for a given trial.
class trial_rng {
  public:
    trial_rng(std::uint64_t seed, std::uint64_t trial) {
        std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (trial + 1));
        m_gen.seed(splitmix64(s));
    }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
        return d(m_gen);
    }

    double uniform01() {
        std::uniform_real_distribution<double> d(0.0, 1.0);
        return d(m_gen);
    }

    std::mt19937_64& engine() { return m_gen; }

  private:
    std::mt19937_64 m_gen;
};

} // namespace tailbound
