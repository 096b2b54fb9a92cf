#include "cogsense/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cogsense/errors.hpp"

namespace cogsense {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as a number");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long u = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return u;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + v +
                          "' as a non-negative integer");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" + v + "'");
}

}  // namespace

FuserSpec parse_fuser(const std::string& token) {
    FuserSpec spec;
    spec.name = token;
    if (token == "and") {
        spec.kind = FuserKind::logic_and;
    } else if (token == "or") {
        spec.kind = FuserKind::logic_or;
    } else if (token == "majority") {
        spec.kind = FuserKind::majority;
    } else if (token == "nlms") {
        spec.kind = FuserKind::nlms;
    } else if (token == "mlp") {
        spec.kind = FuserKind::mlp;
    } else if (token.rfind("k_of_m:", 0) == 0) {
        spec.kind = FuserKind::k_of_m;
        spec.k = parse_u64("fuser", token.substr(7));
        if (spec.k < 1) throw ConfigError("config key 'fuser': k_of_m requires k >= 1");
    } else {
        throw ConfigError("config key 'fuser': unknown rule '" + token +
                          "' (expected and|or|majority|k_of_m:K|nlms|mlp)");
    }
    return spec;
}

std::size_t ScenarioConfig::training_trials() const {
    return static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(trials)));
}

void ScenarioConfig::validate() const {
    if (m_users < 1) throw ConfigError("m_users: must be >= 1");
    if (n_samples < 2 || n_samples % 2 != 0)
        throw ConfigError("n_samples: must be an even integer >= 2 (two real dimensions "
                          "per complex sample), got " + std::to_string(n_samples));
    if (snr_db.size() != m_users)
        throw ConfigError("snr_db: expected " + std::to_string(m_users) +
                          " comma-separated values (one per user), got " +
                          std::to_string(snr_db.size()));
    if (noise_variance <= 0.0) throw ConfigError("noise_variance: must be > 0");
    if (!(target_pfa > 0.0 && target_pfa < 1.0))
        throw ConfigError("target_pfa: must lie in the open interval (0,1), got " +
                          std::to_string(target_pfa));
    if (reporting.fading_variance <= 0.0)
        throw ConfigError("reporting: fading variance must be > 0");
    if (reporting.noise_variance <= 0.0)
        throw ConfigError("reporting: noise variance must be > 0");
    if (fading_doppler_hz <= 0.0) throw ConfigError("fading: doppler must be > 0");
    if (fading_sample_interval_s <= 0.0) throw ConfigError("fading: sample interval must be > 0");
    if (fading_doppler_hz * fading_sample_interval_s >= 0.5)
        throw ConfigError("fading: doppler * sample_interval must be < 0.5");
    if (fusers.empty()) throw ConfigError("fuser: at least one fusion rule is required");
    for (const auto& f : fusers) {
        if (f.kind == FuserKind::k_of_m && (f.k < 1 || f.k > m_users))
            throw ConfigError("fuser: k_of_m k must lie in [1, m_users], got k=" +
                              std::to_string(f.k));
    }
    if (trials < 1) throw ConfigError("trials: must be >= 1");
    if (!seed_set) throw ConfigError("seed: required");
    if (!(train_fraction >= 0.0 && train_fraction < 1.0))
        throw ConfigError("train_fraction: must lie in [0,1), got " +
                          std::to_string(train_fraction));
    if (!(nlms_step > 0.0 && nlms_step < 2.0))
        throw ConfigError("nlms_step: must lie in (0,2), got " + std::to_string(nlms_step));
    if (nlms_epochs < 1) throw ConfigError("nlms_epochs: must be >= 1");
    if (mlp_hidden < 1) throw ConfigError("mlp_hidden: must be >= 1");
    if (mlp_learning_rate <= 0.0) throw ConfigError("mlp_learning_rate: must be > 0");
    if (mlp_patience < 1) throw ConfigError("mlp_patience: must be >= 1");

    const bool wants_hard_rules =
        std::any_of(fusers.begin(), fusers.end(), [](const FuserSpec& f) { return !f.adaptive(); });
    if (!reporting.csi_known && (wants_hard_rules || report_mode == ReportMode::hard))
        throw ConfigError("reporting: csi_known=false exposes only |received| features; "
                          "hard-rule fusion and hard report mode both need csi_known=true");

    const bool wants_adaptive =
        std::any_of(fusers.begin(), fusers.end(), [](const FuserSpec& f) { return f.adaptive(); });
    if (wants_adaptive && training_trials() < 2)
        throw ConfigError("train_fraction: adaptive fusers need at least 2 training trials");
    if (training_trials() >= trials)
        throw ConfigError("train_fraction: leaves no evaluation trials");
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool m_users_set = false, snr_set = false, trials_set = false;

    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty())
            throw ConfigError(origin + ": config key '" + key + "' has an empty value");

        if (key == "m_users") {
            cfg.m_users = parse_u64(key, value);
            m_users_set = true;
        } else if (key == "n_samples") {
            cfg.n_samples = parse_u64(key, value);
        } else if (key == "snr_db") {
            cfg.snr_db.clear();
            for (const auto& item : split_list(value)) cfg.snr_db.push_back(parse_double(key, item));
            snr_set = true;
        } else if (key == "noise_variance") {
            cfg.noise_variance = parse_double(key, value);
        } else if (key == "target_pfa") {
            cfg.target_pfa = parse_double(key, value);
        } else if (key == "report_mode") {
            if (value == "soft")
                cfg.report_mode = ReportMode::soft;
            else if (value == "hard")
                cfg.report_mode = ReportMode::hard;
            else
                throw ConfigError("config key 'report_mode': expected soft|hard, got '" + value +
                                  "'");
        } else if (key == "reporting") {
            const auto parts = split_list(value);
            if (parts.size() != 3)
                throw ConfigError("config key 'reporting': expected "
                                  "'fading_variance,noise_variance,csi_known'");
            cfg.reporting.fading_variance = parse_double(key, parts[0]);
            cfg.reporting.noise_variance = parse_double(key, parts[1]);
            cfg.reporting.csi_known = parse_bool(key, parts[2]);
        } else if (key == "fading") {
            const auto parts = split_list(value);
            if (parts.size() != 2)
                throw ConfigError("config key 'fading': expected 'max_doppler_hz,sample_interval_s'");
            cfg.fading_doppler_hz = parse_double(key, parts[0]);
            cfg.fading_sample_interval_s = parse_double(key, parts[1]);
        } else if (key == "fuser") {
            cfg.fusers.clear();
            for (const auto& item : split_list(value)) cfg.fusers.push_back(parse_fuser(item));
        } else if (key == "trials") {
            cfg.trials = parse_u64(key, value);
            trials_set = true;
        } else if (key == "seed") {
            cfg.seed = parse_u64(key, value);
            cfg.seed_set = true;
        } else if (key == "train_fraction") {
            cfg.train_fraction = parse_double(key, value);
        } else if (key == "nlms_step") {
            cfg.nlms_step = parse_double(key, value);
        } else if (key == "nlms_epochs") {
            cfg.nlms_epochs = parse_u64(key, value);
        } else if (key == "nlms_threshold") {
            cfg.nlms_threshold = parse_double(key, value);
        } else if (key == "mlp_hidden") {
            cfg.mlp_hidden = parse_u64(key, value);
        } else if (key == "mlp_learning_rate") {
            cfg.mlp_learning_rate = parse_double(key, value);
        } else if (key == "mlp_max_epochs") {
            cfg.mlp_max_epochs = parse_u64(key, value);
        } else if (key == "mlp_patience") {
            cfg.mlp_patience = parse_u64(key, value);
        } else {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown config key '" +
                              key + "'");
        }
    }

    if (!m_users_set) throw ConfigError(origin + ": missing required key 'm_users'");
    if (!snr_set) throw ConfigError(origin + ": missing required key 'snr_db'");
    if (!trials_set) throw ConfigError(origin + ": missing required key 'trials'");
    if (!cfg.seed_set) throw ConfigError(origin + ": missing required key 'seed'");

    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

}  // namespace cogsense
