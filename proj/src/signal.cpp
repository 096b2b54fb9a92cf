#include "cogsense/signal.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cogsense/errors.hpp"

namespace cogsense {

UserChannel UserChannel::from_snr(double snr_linear, double noise_variance) {
    if (snr_linear < 0.0) throw ConfigError("snr must be >= 0, got " + std::to_string(snr_linear));
    if (noise_variance <= 0.0)
        throw ConfigError("noise_variance must be > 0, got " + std::to_string(noise_variance));
    UserChannel ch;
    ch.gain_h = {std::sqrt(snr_linear * noise_variance), 0.0};
    ch.noise_variance = noise_variance;
    ch.snr = snr_linear;
    return ch;
}

PrimarySignal generate_qam(std::size_t n, int order, RandomStream& rng) {
    if (order != 4)
        throw ConfigError("unsupported modulation order " + std::to_string(order) +
                          " (only 4-QAM is supported)");
    if (n < 1) throw InputError("generate_qam: n must be >= 1");

    static constexpr double a = std::numbers::sqrt2 / 2.0;  // 1/sqrt(2)
    static const cplx constellation[4] = {{a, a}, {a, -a}, {-a, a}, {-a, -a}};

    PrimarySignal sig;
    sig.modulation_order = order;
    sig.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        sig.samples.push_back(constellation[rng.uniform_below(4)]);
    return sig;
}

std::vector<cplx> generate_awgn(std::size_t n, double variance, RandomStream& rng) {
    if (variance < 0.0)
        throw ConfigError("noise variance must be >= 0, got " + std::to_string(variance));
    if (n < 1) throw InputError("generate_awgn: n must be >= 1");

    std::vector<cplx> out;
    out.reserve(n);
    if (variance == 0.0) {
        out.assign(n, cplx{0.0, 0.0});
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) out.push_back(rng.complex_gaussian(variance));
    return out;
}

FadingProcess generate_fading(std::size_t n, double max_doppler_hz,
                              double sample_interval_s, RandomStream& rng) {
    if (n < 1) throw InputError("generate_fading: n must be >= 1");
    if (max_doppler_hz <= 0.0) throw ConfigError("max_doppler_hz must be > 0");
    if (sample_interval_s <= 0.0) throw ConfigError("sample_interval_s must be > 0");
    const double prod = max_doppler_hz * sample_interval_s;
    if (prod >= 0.5)
        throw ConfigError("max_doppler_hz * sample_interval_s must be < 0.5, got " +
                          std::to_string(prod));

    // Sum-of-sinusoids with randomized arrival angles (Zheng/Xiao form):
    //   gains(t) = sqrt(1/M) * sum_m [ cos(wd*t*cos(a_m) + phi_m)
    //                                + j*cos(wd*t*sin(a_m) + psi_m) ]
    //   a_m = (2*pi*m - pi + theta) / (4M)
    // which gives unit mean power and autocorrelation ~ J0(wd*tau).
    constexpr int m_sin = kFadingSinusoids;
    const double pi = std::numbers::pi;
    const double theta = (rng.uniform() * 2.0 - 1.0) * pi;

    double w_cos[m_sin], w_sin[m_sin], phi[m_sin], psi[m_sin];
    const double wd = 2.0 * pi * max_doppler_hz;
    for (int m = 0; m < m_sin; ++m) {
        const double angle = (2.0 * pi * (m + 1) - pi + theta) / (4.0 * m_sin);
        w_cos[m] = wd * std::cos(angle);
        w_sin[m] = wd * std::sin(angle);
        phi[m] = (rng.uniform() * 2.0 - 1.0) * pi;
        psi[m] = (rng.uniform() * 2.0 - 1.0) * pi;
    }

    FadingProcess fp;
    fp.max_doppler_hz = max_doppler_hz;
    fp.sample_interval_s = sample_interval_s;
    fp.gains.resize(n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(m_sin));
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * sample_interval_s;
        double re = 0.0, im = 0.0;
        for (int m = 0; m < m_sin; ++m) {
            re += std::cos(w_cos[m] * t + phi[m]);
            im += std::cos(w_sin[m] * t + psi[m]);
        }
        fp.gains[k] = {re * norm, im * norm};
    }
    return fp;
}

std::vector<cplx> received_samples(Hypothesis hyp, const PrimarySignal& signal,
                                   const UserChannel& channel, RandomStream& rng) {
    if (signal.samples.empty()) throw InputError("received_samples: signal length must be >= 1");

    std::vector<cplx> out = generate_awgn(signal.samples.size(), channel.noise_variance, rng);
    if (hyp == Hypothesis::h1) {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += channel.gain_h * signal.samples[i];
    }
    return out;
}

}  // namespace cogsense
