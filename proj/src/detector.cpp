#include "cogsense/detector.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cogsense/errors.hpp"

namespace cogsense {

DetectorConfig DetectorConfig::from_time_bandwidth(double bandwidth_hz, double duration_s) {
    if (bandwidth_hz <= 0.0) throw ConfigError("bandwidth_hz must be > 0");
    if (duration_s <= 0.0) throw ConfigError("duration_s must be > 0");
    DetectorConfig cfg;
    cfg.bandwidth_hz = bandwidth_hz;
    cfg.duration_s = duration_s;
    cfg.n_samples = static_cast<std::size_t>(std::llround(2.0 * bandwidth_hz * duration_s));
    if (cfg.n_samples < 1) throw ConfigError("time-bandwidth product rounds to zero samples");
    return cfg;
}

DetectorConfig DetectorConfig::from_samples(std::size_t n_samples) {
    if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
    DetectorConfig cfg;
    cfg.n_samples = n_samples;
    return cfg;
}

EnergyStatistic energy(std::span<const cplx> samples, int user_index) {
    if (samples.empty()) throw InputError("energy: sample sequence must be non-empty");
    double acc = 0.0;
    for (const cplx& s : samples) acc += std::norm(s);
    return EnergyStatistic{acc, user_index, samples.size()};
}

double q_function(double x) {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double q_inverse(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw ConfigError("q_inverse: p must lie in (0,1), got " + std::to_string(p));

    // Bisection bracket followed by Newton refinement on q_function itself,
    // so the round trip q_function(q_inverse(p)) lands within a few ulp of p.
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (q_function(mid) > p)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    const double inv_sqrt_2pi = 0.3989422804014326779;
    for (int i = 0; i < 8; ++i) {
        const double err = q_function(x) - p;
        if (err == 0.0) break;
        const double pdf = inv_sqrt_2pi * std::exp(-0.5 * x * x);
        if (pdf <= 0.0) break;
        const double step = err / pdf;  // Q' = -pdf
        x += step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(x))) break;
    }
    return x;
}

double threshold_for_pfa(double target_pfa, double noise_variance, std::size_t n_samples) {
    if (!(target_pfa > 0.0 && target_pfa < 1.0))
        throw ConfigError("target_pfa must lie in (0,1), got " + std::to_string(target_pfa));
    if (noise_variance <= 0.0) throw ConfigError("noise_variance must be > 0");
    if (n_samples < 1) throw ConfigError("n_samples must be >= 1");

    const double n = static_cast<double>(n_samples);
    return q_inverse(target_pfa) * noise_variance * std::sqrt(2.0 * n) + n * noise_variance;
}

double pd_theoretical(double target_pfa, double snr, std::size_t n_samples) {
    if (!(target_pfa > 0.0 && target_pfa < 1.0))
        throw ConfigError("target_pfa must lie in (0,1), got " + std::to_string(target_pfa));
    if (snr < 0.0) throw ConfigError("snr must be >= 0, got " + std::to_string(snr));
    if (n_samples < 1) throw ConfigError("n_samples must be >= 1");

    const double n = static_cast<double>(n_samples);
    const double arg = (q_inverse(target_pfa) - std::sqrt(n / 2.0) * snr) /
                       std::sqrt(1.0 + 2.0 * snr);
    return q_function(arg);
}

double pd_as_printed(double target_pfa, double snr, double noise_sigma, std::size_t n_samples) {
    if (!(target_pfa > 0.0 && target_pfa < 1.0))
        throw ConfigError("target_pfa must lie in (0,1), got " + std::to_string(target_pfa));
    if (snr < 0.0) throw ConfigError("snr must be >= 0");
    if (noise_sigma <= 0.0) throw ConfigError("noise_sigma must be > 0");
    if (n_samples < 1) throw ConfigError("n_samples must be >= 1");

    const double n = static_cast<double>(n_samples);
    const double sigma2 = noise_sigma * noise_sigma;
    const double numerator = q_inverse(target_pfa) * sigma2 * std::sqrt(2.0 * n) + n * sigma2;
    const double denominator = noise_sigma * std::sqrt(2.0 * n * (1.0 + 2.0 * snr));
    return q_function(numerator / denominator);
}

DetectionOperatingPoint operating_point(double target_pfa, double snr, double noise_variance,
                                        std::size_t n_samples) {
    DetectionOperatingPoint pt;
    pt.p_fa = target_pfa;
    pt.snr = snr;
    pt.n_samples = n_samples;
    pt.noise_variance = noise_variance;
    pt.threshold = threshold_for_pfa(target_pfa, noise_variance, n_samples);
    pt.p_d = pd_theoretical(target_pfa, snr, n_samples);
    pt.p_md = 1.0 - pt.p_d;
    return pt;
}

int decide(const EnergyStatistic& statistic, double threshold) {
    return statistic.value > threshold ? 1 : 0;
}

}  // namespace cogsense
