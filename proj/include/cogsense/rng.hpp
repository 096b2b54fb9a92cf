#pragma once

#include <complex>
#include <cstdint>

namespace cogsense {

// Identifies which random quantity a derived stream feeds. Streams keyed on
// distinct purposes are statistically independent even within one trial.
enum class StreamPurpose : std::uint32_t {
    hypothesis = 1,
    primary_signal = 2,
    sensing_noise = 3,
    sensing_gain = 4,
    report_fading = 5,
    report_noise = 6,
    weight_init = 7,
    generic = 8,
};

// Deterministic pseudo-random stream (xoshiro256++ core, splitmix64 seeding).
//
// Every stream is a pure function of its key (seed, trial, purpose, user),
// so per-trial streams can be created in any order and on any thread while
// producing identical sequences. Gaussian draws use Box-Muller with one
// cached deviate.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    // Derive an independent stream for one (trial, purpose, user) slot.
    static RandomStream derive(std::uint64_t seed, std::uint64_t trial_index,
                               StreamPurpose purpose, std::uint32_t user_index = 0);

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform();

    // Uniform integer in [0, n), n >= 1.
    std::uint64_t uniform_below(std::uint64_t n);

    // Standard normal deviate.
    double gaussian();

    // Circularly-symmetric complex Gaussian with E|z|^2 = total_variance.
    std::complex<double> complex_gaussian(double total_variance);

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t state_[4];
    double cached_gaussian_ = 0.0;
    bool has_cached_gaussian_ = false;
};

}  // namespace cogsense
