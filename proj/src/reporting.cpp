#include "cogsense/reporting.hpp"

#include <cmath>
#include <string>

#include "cogsense/errors.hpp"

namespace cogsense {

Report transmit_report(double payload, ReportMode mode, const ReportingChannel& channel,
                       RandomStream& rng, int user_index) {
    if (channel.fading_variance <= 0.0) throw ConfigError("fading_variance must be > 0");
    if (channel.noise_variance <= 0.0) throw ConfigError("noise_variance must be > 0");
    if (mode == ReportMode::soft) {
        if (payload < 0.0)
            throw InputError("soft report payload must be >= 0, got " + std::to_string(payload));
    } else {
        if (payload != 0.0 && payload != 1.0)
            throw InputError("hard report payload must be 0 or 1, got " + std::to_string(payload));
    }

    Report r;
    r.mode = mode;
    r.payload = payload;
    r.csi_known = channel.csi_known;
    r.user_index = user_index;
    const cplx f = rng.complex_gaussian(channel.fading_variance);
    const cplx eta = rng.complex_gaussian(channel.noise_variance);
    r.received = f * payload + eta;
    r.fading_gain = channel.csi_known ? f : cplx{0.0, 0.0};
    return r;
}

double equalize(const Report& report) {
    if (!report.csi_known)
        throw UsageError("equalize: report carries no CSI; only |received| is available");
    const double mag2 = std::norm(report.fading_gain);
    if (std::sqrt(mag2) <= kDeepFadeEpsilon)
        throw DeepFadeError("equalize: fading gain magnitude below deep-fade epsilon");
    return (report.received * std::conj(report.fading_gain)).real() / mag2;
}

double equalize_or_erase(const Report& report) {
    if (!report.csi_known)
        throw UsageError("equalize_or_erase: report carries no CSI");
    const double mag2 = std::norm(report.fading_gain);
    if (std::sqrt(mag2) <= kDeepFadeEpsilon) return 0.0;
    return (report.received * std::conj(report.fading_gain)).real() / mag2;
}

int recover_hard_bit(const Report& report) {
    if (report.mode != ReportMode::hard)
        throw UsageError("recover_hard_bit: report is not hard-mode");
    if (!report.csi_known)
        throw UsageError("recover_hard_bit: requires CSI at the fusion center");
    const double mag2 = std::norm(report.fading_gain);
    if (std::sqrt(mag2) <= kDeepFadeEpsilon) return 0;  // erasure-to-absent
    const double eq = (report.received * std::conj(report.fading_gain)).real() / mag2;
    return eq > 0.5 ? 1 : 0;
}

}  // namespace cogsense
