#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "cogsense/rng.hpp"

namespace cogsense {

using cplx = std::complex<double>;

enum class Hypothesis { h0, h1 };

// Primary-user baseband symbols, unit average power.
struct PrimarySignal {
    std::vector<cplx> samples;
    int modulation_order = 4;
};

// Sensing channel between the primary transmitter and one secondary user.
// `snr` is linear: |gain_h|^2 * signal power / noise_variance, where
// noise_variance is the total complex noise power E|n|^2.
struct UserChannel {
    cplx gain_h{1.0, 0.0};
    double noise_variance = 1.0;
    double snr = 1.0;

    // Channel for a unit-power signal at the given linear SNR.
    static UserChannel from_snr(double snr_linear, double noise_variance);
};

// Complex fading gain sequence, unit mean power, Rayleigh envelope.
struct FadingProcess {
    std::vector<cplx> gains;
    double max_doppler_hz = 0.0;
    double sample_interval_s = 0.0;
};

// n uniform draws from the order-4 QAM constellation {(+-1 +- j)/sqrt(2)}.
// Orders other than 4 are rejected.
PrimarySignal generate_qam(std::size_t n, int order, RandomStream& rng);

// n i.i.d. circularly-symmetric complex Gaussian samples with E|w|^2 = variance.
std::vector<cplx> generate_awgn(std::size_t n, double variance, RandomStream& rng);

// Clarke/Jakes sum-of-sinusoids Rayleigh fading process. The autocorrelation
// approximates J0(2*pi*fd*tau); requires max_doppler_hz * sample_interval_s < 0.5.
FadingProcess generate_fading(std::size_t n, double max_doppler_hz,
                              double sample_interval_s, RandomStream& rng);

// Number of sinusoids per quadrature component in generate_fading.
inline constexpr int kFadingSinusoids = 64;

// Per-sample received sequence at one secondary user:
//   H0: n(k)           H1: h * d(k) + n(k)
std::vector<cplx> received_samples(Hypothesis hyp, const PrimarySignal& signal,
                                   const UserChannel& channel, RandomStream& rng);

}  // namespace cogsense
