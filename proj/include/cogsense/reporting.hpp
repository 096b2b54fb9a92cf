#pragma once

#include <complex>

#include "cogsense/rng.hpp"
#include "cogsense/signal.hpp"

namespace cogsense {

enum class ReportMode { soft, hard };

// Fading-plus-noise channel between a secondary user and the fusion center:
//   y = f * d + eta,  f ~ CN(0, fading_variance),  eta ~ CN(0, noise_variance),
// with independent draws per report. csi_known marks whether the fusion
// center learns f (pilot-aided) and can equalize coherently.
struct ReportingChannel {
    double fading_variance = 1.0;
    double noise_variance = 1.0;
    bool csi_known = true;
};

// One report as seen at the fusion center.
struct Report {
    ReportMode mode = ReportMode::soft;
    double payload = 0.0;    // energy statistic (soft) or decision bit (hard)
    cplx received{0.0, 0.0};
    cplx fading_gain{0.0, 0.0};  // meaningful only when csi_known
    bool csi_known = true;
    int user_index = -1;
};

// Gains below this magnitude count as a deep fade and cannot be equalized.
inline constexpr double kDeepFadeEpsilon = 1e-9;

// Send one payload through the reporting channel with fresh fading/noise draws.
Report transmit_report(double payload, ReportMode mode, const ReportingChannel& channel,
                       RandomStream& rng, int user_index = -1);

// Coherent equalization Re(received * conj(f) / |f|^2); unbiased for the
// payload. Throws DeepFadeError when |f| <= kDeepFadeEpsilon and UsageError
// when the report carries no CSI.
double equalize(const Report& report);

// Equalized value with the deep-fade erasure policy applied: a deep fade
// yields 0 (absent) instead of throwing.
double equalize_or_erase(const Report& report);

// Hard-decision recovery for a hard-mode report: equalize and compare to the
// {0,1} alphabet midpoint; deep fades recover as 0.
int recover_hard_bit(const Report& report);

}  // namespace cogsense
