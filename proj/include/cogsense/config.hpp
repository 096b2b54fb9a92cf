#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cogsense/reporting.hpp"

namespace cogsense {

enum class FuserKind { logic_and, logic_or, majority, k_of_m, nlms, mlp };

struct FuserSpec {
    FuserKind kind = FuserKind::majority;
    std::size_t k = 0;  // only for k_of_m
    std::string name;   // "and", "or", "majority", "k_of_m:K", "nlms", "mlp"

    bool adaptive() const { return kind == FuserKind::nlms || kind == FuserKind::mlp; }
};

FuserSpec parse_fuser(const std::string& token);

// Full Monte Carlo scenario description. Defaults follow the standard
// simulation setup (carrier fading 100 Hz Doppler at 1e-5 s sampling, 4-QAM
// primary signal, 10 hidden units); m_users, snr_db, trials and seed have no
// defaults and must be supplied.
struct ScenarioConfig {
    std::size_t m_users = 0;
    std::size_t n_samples = 1000;  // time-bandwidth product N (even)
    std::vector<double> snr_db;    // per-user average sensing SNR
    double noise_variance = 1.0;   // sigma^2 in the detector formulas
    double target_pfa = 0.1;
    ReportMode report_mode = ReportMode::hard;
    ReportingChannel reporting{1.0, 0.31622776601683794, true};  // 5 dB report SNR
    double fading_doppler_hz = 100.0;
    double fading_sample_interval_s = 1e-5;
    std::vector<FuserSpec> fusers{FuserSpec{FuserKind::majority, 0, "majority"}};
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double train_fraction = 0.5;

    // Adaptive-fuser hyperparameters.
    double nlms_step = 0.05;
    std::size_t nlms_epochs = 5;
    double nlms_threshold = 0.5;
    std::size_t mlp_hidden = 10;
    double mlp_learning_rate = 1.0;
    std::size_t mlp_max_epochs = 300;
    std::size_t mlp_patience = 6;

    std::size_t training_trials() const;
    std::size_t evaluation_trials() const { return trials - training_trials(); }

    // Throws ConfigError naming the offending key and its legal range.
    void validate() const;
};

// Parse the flat key-value scenario file (one `key = value` per line, `#`
// comments, lists comma-separated).
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text, const std::string& origin);

}  // namespace cogsense
