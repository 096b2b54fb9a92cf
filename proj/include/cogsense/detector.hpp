#pragma once

#include <cstddef>
#include <span>

#include "cogsense/signal.hpp"

namespace cogsense {

// Energy detector configuration. n_samples is the time-bandwidth product
// N = 2BT (real degrees of freedom of the sensed waveform). When bandwidth
// and duration are given, n_samples = round(2*B*T); otherwise B and T are
// optional metadata.
struct DetectorConfig {
    std::size_t n_samples = 0;
    double bandwidth_hz = 0.0;
    double duration_s = 0.0;

    static DetectorConfig from_time_bandwidth(double bandwidth_hz, double duration_s);
    static DetectorConfig from_samples(std::size_t n_samples);
};

struct EnergyStatistic {
    double value = 0.0;
    int user_index = -1;
    std::size_t n_samples = 0;
};

// One point on the detector's theoretical operating curve.
struct DetectionOperatingPoint {
    double p_fa = 0.0;
    double p_d = 0.0;
    double p_md = 0.0;  // 1 - p_d
    double threshold = 0.0;
    double snr = 0.0;
    std::size_t n_samples = 0;
    double noise_variance = 1.0;
};

// Sum of squared magnitudes over the sample window.
EnergyStatistic energy(std::span<const cplx> samples, int user_index = -1);

// Standard normal upper-tail probability Q(x) and its inverse.
double q_function(double x);
double q_inverse(double p);

// Detection threshold for a target false-alarm rate under the Gaussian
// approximation of the H0 statistic (mean N*sigma^2, std sqrt(2N)*sigma^2,
// real-sample chi-square convention):
//   lambda = Qinv(pfa) * sigma^2 * sqrt(2N) + N * sigma^2
double threshold_for_pfa(double target_pfa, double noise_variance, std::size_t n_samples);

// Detection probability at a target false-alarm rate, corrected standard
// Gaussian-approximation form:
//   Pd = Q( (Qinv(Pf) - sqrt(N/2)*SNR) / sqrt(1 + 2*SNR) )
// Reduces to Pd = Pf at SNR = 0 and is increasing in SNR.
double pd_theoretical(double target_pfa, double snr, std::size_t n_samples);

// Same quantity evaluated with the uncorrected textbook-variant form
//   Q( (Qinv(Pf)*sigma^2*sqrt(2N) + N*sigma^2) / (sigma*sqrt(2N*(1+2*SNR))) )
// kept for diagnosis: it omits the H1 mean shift, so it does NOT satisfy
// Pd = Pf at SNR = 0. Not used by any simulation path.
double pd_as_printed(double target_pfa, double snr, double noise_sigma, std::size_t n_samples);

// Operating point combining the two theoretical quantities above.
DetectionOperatingPoint operating_point(double target_pfa, double snr, double noise_variance,
                                        std::size_t n_samples);

// Hard decision: 1 iff the statistic strictly exceeds the threshold
// (ties resolve to H0).
int decide(const EnergyStatistic& statistic, double threshold);

}  // namespace cogsense
