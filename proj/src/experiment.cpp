#include "cogsense/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cogsense/detector.hpp"
#include "cogsense/errors.hpp"
#include "cogsense/log.hpp"
#include "cogsense/reporting.hpp"
#include "cogsense/signal.hpp"

namespace cogsense {

namespace {

// Format a double with 9 significant digits (output-file float convention).
std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void synthesize_range(const ScenarioConfig& cfg, std::size_t begin, std::size_t end,
                      std::vector<TrialData>& out) {
    // A sensing window of time-bandwidth product N carries N/2 complex
    // baseband samples; per-real-dimension noise variance sigma^2 means
    // complex noise variance 2*sigma^2. Under that mapping the H0 statistic
    // has mean N*sigma^2 and std sqrt(2N)*sigma^2, matching the thresholds.
    const std::size_t n_complex = cfg.n_samples / 2;
    const double complex_noise_var = 2.0 * cfg.noise_variance;
    const double lambda = threshold_for_pfa(cfg.target_pfa, cfg.noise_variance, cfg.n_samples);

    std::vector<double> snr_linear(cfg.m_users);
    for (std::size_t u = 0; u < cfg.m_users; ++u)
        snr_linear[u] = std::pow(10.0, cfg.snr_db[u] / 10.0);

    for (std::size_t t = begin; t < end; ++t) {
        TrialData& trial = out[t];
        auto hyp_rng = RandomStream::derive(cfg.seed, t, StreamPurpose::hypothesis);
        const Hypothesis hyp = hyp_rng.bernoulli(0.5) ? Hypothesis::h1 : Hypothesis::h0;
        trial.label = hyp == Hypothesis::h1 ? 1 : 0;
        trial.features.resize(cfg.m_users);
        trial.bits.resize(cfg.m_users);

        for (std::size_t u = 0; u < cfg.m_users; ++u) {
            const auto user = static_cast<std::uint32_t>(u);

            // Received window per Eq-style model: block Rayleigh fading gain
            // h (E|h|^2 = snr * complex noise var for the unit-power signal),
            // fresh per window.
            auto noise_rng = RandomStream::derive(cfg.seed, t, StreamPurpose::sensing_noise, user);
            std::vector<cplx> window = generate_awgn(n_complex, complex_noise_var, noise_rng);
            if (hyp == Hypothesis::h1) {
                auto gain_rng =
                    RandomStream::derive(cfg.seed, t, StreamPurpose::sensing_gain, user);
                const cplx h = gain_rng.complex_gaussian(snr_linear[u] * complex_noise_var);
                auto sig_rng =
                    RandomStream::derive(cfg.seed, t, StreamPurpose::primary_signal, user);
                const PrimarySignal sig = generate_qam(n_complex, 4, sig_rng);
                for (std::size_t i = 0; i < n_complex; ++i) window[i] += h * sig.samples[i];
            }

            const EnergyStatistic stat = energy(window, static_cast<int>(u));
            const int local_bit = decide(stat, lambda);

            const double payload =
                cfg.report_mode == ReportMode::soft ? stat.value : static_cast<double>(local_bit);
            auto rep_rng = RandomStream::derive(cfg.seed, t, StreamPurpose::report_fading, user);
            const Report report = transmit_report(payload, cfg.report_mode, cfg.reporting,
                                                  rep_rng, static_cast<int>(u));

            if (cfg.report_mode == ReportMode::hard) {
                const int rec = recover_hard_bit(report);
                trial.features[u] = static_cast<double>(rec);
                trial.bits[u] = rec;
            } else if (cfg.reporting.csi_known) {
                const double eq = equalize_or_erase(report);
                trial.features[u] = eq;
                trial.bits[u] = eq > lambda ? 1 : 0;
            } else {
                trial.features[u] = std::abs(report.received);
                trial.bits[u] = 0;  // unusable without CSI; validated at config time
            }
        }
    }
}

std::vector<FusionInput> to_fusion_inputs(const std::vector<TrialData>& trials, std::size_t begin,
                                          std::size_t end) {
    std::vector<FusionInput> rows;
    rows.reserve(end - begin);
    for (std::size_t t = begin; t < end; ++t)
        rows.push_back(FusionInput::from_user_features(trials[t].features, trials[t].label, t));
    return rows;
}

std::pair<AdaptiveFuser, TrainingRecord> train_nlms(const ScenarioConfig& cfg,
                                                    const std::vector<FusionInput>& train) {
    AdaptiveFuser fuser(cfg.m_users + 1, cfg.nlms_step, cfg.nlms_threshold);
    TrainingRecord rec;
    for (std::size_t epoch = 0; epoch < cfg.nlms_epochs; ++epoch) {
        double sum_e2 = 0.0;
        for (const auto& row : train) {
            const double e = fuser.nlms_step(row);
            sum_e2 += e * e;
        }
        rec.train_mse.push_back(sum_e2 / static_cast<double>(train.size()));
        rec.validation_mse.push_back(0.0);
        rec.test_mse.push_back(0.0);
        double wn = 0.0;
        for (double w : fuser.weights()) wn += w * w;
        rec.gradient_norm.push_back(std::sqrt(wn));
    }
    rec.stop_epoch = cfg.nlms_epochs;
    rec.best_validation_mse = rec.train_mse.empty() ? 0.0 : rec.train_mse.back();
    return {std::move(fuser), std::move(rec)};
}

}  // namespace

std::vector<TrialData> synthesize_trials(const ScenarioConfig& cfg, unsigned threads) {
    cfg.validate();
    std::vector<TrialData> trials(cfg.trials);
    if (threads <= 1 || cfg.trials < 2 * threads) {
        synthesize_range(cfg, 0, cfg.trials, trials);
        return trials;
    }
    std::vector<std::thread> workers;
    const std::size_t chunk = (cfg.trials + threads - 1) / threads;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < threads; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(cfg.trials, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back([&, begin, end] {
            try {
                synthesize_range(cfg, begin, end, trials);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return trials;
}

RunSummary run_experiment(const ScenarioConfig& cfg, unsigned threads,
                          const LoadedFusers* loaded) {
    const auto t0 = std::chrono::steady_clock::now();
    cfg.validate();

    const std::vector<TrialData> trials = synthesize_trials(cfg, threads);
    const std::size_t n_train = cfg.training_trials();
    const std::size_t n_eval = cfg.trials - n_train;
    if (n_eval == 0) throw ConfigError("train_fraction leaves no evaluation trials");

    std::vector<int> eval_labels;
    eval_labels.reserve(n_eval);
    for (std::size_t t = n_train; t < cfg.trials; ++t) eval_labels.push_back(trials[t].label);
    const bool both_classes =
        std::any_of(eval_labels.begin(), eval_labels.end(), [](int l) { return l == 1; }) &&
        std::any_of(eval_labels.begin(), eval_labels.end(), [](int l) { return l == 0; });
    if (!both_classes)
        throw InputError("evaluation trials contain a single class; increase trials");

    const bool needs_training =
        std::any_of(cfg.fusers.begin(), cfg.fusers.end(),
                    [&](const FuserSpec& f) {
                        if (!f.adaptive()) return false;
                        if (loaded && f.kind == FuserKind::nlms && loaded->nlms) return false;
                        if (loaded && f.kind == FuserKind::mlp && loaded->mlp) return false;
                        return true;
                    });
    std::vector<FusionInput> train_rows;
    if (needs_training) train_rows = to_fusion_inputs(trials, 0, n_train);

    RunSummary summary;
    summary.config = cfg;
    summary.training_trials = n_train;
    summary.evaluation_trials = n_eval;

    for (const FuserSpec& spec : cfg.fusers) {
        FuserResult res;
        res.spec = spec;

        std::vector<double> scores(n_eval);
        std::vector<int> decisions(n_eval);

        if (!spec.adaptive()) {
            const std::size_t k = spec.kind == FuserKind::logic_and ? cfg.m_users
                                  : spec.kind == FuserKind::logic_or ? 1
                                  : spec.kind == FuserKind::majority ? majority_k(cfg.m_users)
                                                                     : spec.k;
            for (std::size_t i = 0; i < n_eval; ++i) {
                const TrialData& trial = trials[n_train + i];
                int count = 0;
                for (int b : trial.bits) count += b;
                scores[i] = static_cast<double>(count);
                decisions[i] = fuse_k_of_m(trial.bits, k);
            }
        } else if (spec.kind == FuserKind::nlms) {
            const bool use_loaded = loaded && loaded->nlms;
            AdaptiveFuser fuser = [&] {
                if (use_loaded) return *loaded->nlms;
                if (n_train == 0)
                    throw ConfigError("nlms fuser requires training trials (train_fraction > 0)");
                auto [trained, rec] = train_nlms(cfg, train_rows);
                res.training = std::move(rec);
                return trained;
            }();
            if (fuser.weights().size() != cfg.m_users + 1)
                throw UsageError("loaded nlms fuser dimension does not match m_users");
            res.has_training_record = !use_loaded;
            res.fuser_json = fuser.to_json();
            for (std::size_t i = 0; i < n_eval; ++i) {
                FusionInput row =
                    FusionInput::from_user_features(trials[n_train + i].features, 0, 0);
                const auto [r, bit] = fuser.predict(row.features);
                scores[i] = r;
                decisions[i] = bit;
            }
        } else {  // mlp
            MlpFuser net = [&] {
                if (loaded && loaded->mlp) return *loaded->mlp;
                if (n_train == 0)
                    throw ConfigError("mlp fuser requires training trials (train_fraction > 0)");
                MlpOptions opt;
                opt.hidden_units = cfg.mlp_hidden;
                opt.learning_rate = cfg.mlp_learning_rate;
                opt.max_epochs = cfg.mlp_max_epochs;
                opt.patience = cfg.mlp_patience;
                opt.seed = cfg.seed;
                return train_mlp(train_rows, opt);
            }();
            if (!net.trained()) throw UsageError("mlp fuser is untrained");
            res.training = net.record();
            res.has_training_record = !(loaded && loaded->mlp);
            res.fuser_json = net.to_json();
            for (std::size_t i = 0; i < n_eval; ++i) {
                const auto [score, bit] = net.predict(trials[n_train + i].features, 0.5);
                scores[i] = score;
                decisions[i] = bit;
            }
        }

        res.roc = roc_from_scores(scores, eval_labels);
        res.auc_value = auc(res.roc);
        res.confusion_matrix = confusion(decisions, eval_labels);
        const auto& cm = res.confusion_matrix;
        res.detection_rate = static_cast<double>(cm.true_positive) /
                             static_cast<double>(cm.true_positive + cm.false_negative);
        res.false_alarm_rate = static_cast<double>(cm.false_positive) /
                               static_cast<double>(cm.false_positive + cm.true_negative);
        summary.fusers.push_back(std::move(res));
    }

    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log_info("run_experiment finished in " + fmt9(summary.wall_seconds) + " s (" +
             std::to_string(cfg.trials) + " trials)");
    return summary;
}

std::vector<std::pair<std::string, std::string>> train_fusers(const ScenarioConfig& cfg,
                                                              unsigned threads) {
    cfg.validate();
    const bool any_adaptive = std::any_of(cfg.fusers.begin(), cfg.fusers.end(),
                                          [](const FuserSpec& f) { return f.adaptive(); });
    if (!any_adaptive)
        throw ConfigError("fuser: training requires an adaptive fuser (nlms or mlp)");

    const std::vector<TrialData> trials = synthesize_trials(cfg, threads);
    const std::size_t n_train = cfg.training_trials();
    if (n_train < 2) throw ConfigError("train_fraction: too few training trials");
    const std::vector<FusionInput> rows = to_fusion_inputs(trials, 0, n_train);

    std::vector<std::pair<std::string, std::string>> out;
    for (const FuserSpec& spec : cfg.fusers) {
        if (spec.kind == FuserKind::nlms) {
            out.emplace_back("nlms", train_nlms(cfg, rows).first.to_json());
        } else if (spec.kind == FuserKind::mlp) {
            MlpOptions opt;
            opt.hidden_units = cfg.mlp_hidden;
            opt.learning_rate = cfg.mlp_learning_rate;
            opt.max_epochs = cfg.mlp_max_epochs;
            opt.patience = cfg.mlp_patience;
            opt.seed = cfg.seed;
            out.emplace_back("mlp", train_mlp(rows, opt).to_json());
        }
    }
    return out;
}

// ---- Emission -----------------------------------------------------------------

namespace {

std::string sanitize_name(const std::string& name) {
    std::string s = name;
    std::replace(s.begin(), s.end(), ':', '_');
    return s;
}

void validate_curve(const RocCurve& curve, const std::string& fuser) {
    if (curve.points.size() < 2 || curve.points.size() != curve.thresholds.size())
        throw InputError("roc curve for '" + fuser + "' is malformed");
    if (curve.points.front().p_fa != 0.0 || curve.points.front().p_d != 0.0 ||
        curve.points.back().p_fa != 1.0 || curve.points.back().p_d != 1.0)
        throw InputError("roc curve for '" + fuser + "' lacks (0,0)/(1,1) endpoints");
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        if (curve.points[i].p_fa < curve.points[i - 1].p_fa ||
            curve.points[i].p_d < curve.points[i - 1].p_d)
            throw InputError("roc curve for '" + fuser + "' is not monotone");
    }
}

std::string render_roc_csv(const RocCurve& curve) {
    std::string out = "threshold,p_fa,p_d\n";
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        out += fmt9(curve.thresholds[i]);
        out += ',';
        out += fmt9(curve.points[i].p_fa);
        out += ',';
        out += fmt9(curve.points[i].p_d);
        out += '\n';
    }
    return out;
}

std::string render_confusion_csv(const ConfusionMatrix& cm) {
    std::string out = "cell,count,percent\n";
    const auto row = [&](const char* name, std::size_t count) {
        out += name;
        out += ',';
        out += std::to_string(count);
        out += ',';
        out += fmt9(cm.percent_of_total(count));
        out += '\n';
    };
    row("true_positive", cm.true_positive);
    row("false_positive", cm.false_positive);
    row("false_negative", cm.false_negative);
    row("true_negative", cm.true_negative);
    out += "accuracy," + std::to_string(cm.true_positive + cm.true_negative) + ',' +
           fmt9(100.0 * cm.accuracy()) + '\n';
    return out;
}

std::string render_training_csv(const TrainingRecord& rec) {
    std::string out = "epoch,train_mse,val_mse,test_mse,grad_norm\n";
    for (std::size_t e = 0; e < rec.train_mse.size(); ++e) {
        out += std::to_string(e + 1);
        out += ',';
        out += fmt9(rec.train_mse[e]);
        out += ',';
        out += fmt9(e < rec.validation_mse.size() ? rec.validation_mse[e] : 0.0);
        out += ',';
        out += fmt9(e < rec.test_mse.size() ? rec.test_mse[e] : 0.0);
        out += ',';
        out += fmt9(e < rec.gradient_norm.size() ? rec.gradient_norm[e] : 0.0);
        out += '\n';
    }
    return out;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else {
            out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_summary_json(const RunSummary& summary) {
    const ScenarioConfig& cfg = summary.config;
    std::ostringstream j;
    j << "{\n";
    j << "  \"schema_version\": \"cogsense-summary-1\",\n";
    j << "  \"seed\": " << cfg.seed << ",\n";
    j << "  \"config\": {\n";
    j << "    \"m_users\": " << cfg.m_users << ",\n";
    j << "    \"n_samples\": " << cfg.n_samples << ",\n";
    j << "    \"snr_db\": [";
    for (std::size_t i = 0; i < cfg.snr_db.size(); ++i)
        j << (i ? ", " : "") << fmt9(cfg.snr_db[i]);
    j << "],\n";
    j << "    \"noise_variance\": " << fmt9(cfg.noise_variance) << ",\n";
    j << "    \"target_pfa\": " << fmt9(cfg.target_pfa) << ",\n";
    j << "    \"report_mode\": \"" << (cfg.report_mode == ReportMode::soft ? "soft" : "hard")
      << "\",\n";
    j << "    \"reporting\": {\"fading_variance\": " << fmt9(cfg.reporting.fading_variance)
      << ", \"noise_variance\": " << fmt9(cfg.reporting.noise_variance)
      << ", \"csi_known\": " << (cfg.reporting.csi_known ? "true" : "false") << "},\n";
    j << "    \"fading\": {\"max_doppler_hz\": " << fmt9(cfg.fading_doppler_hz)
      << ", \"sample_interval_s\": " << fmt9(cfg.fading_sample_interval_s) << "},\n";
    j << "    \"fusers\": [";
    for (std::size_t i = 0; i < cfg.fusers.size(); ++i)
        j << (i ? ", " : "") << '"' << json_escape(cfg.fusers[i].name) << '"';
    j << "],\n";
    j << "    \"trials\": " << cfg.trials << ",\n";
    j << "    \"train_fraction\": " << fmt9(cfg.train_fraction) << ",\n";
    j << "    \"nlms_step\": " << fmt9(cfg.nlms_step) << ",\n";
    j << "    \"nlms_epochs\": " << cfg.nlms_epochs << ",\n";
    j << "    \"nlms_threshold\": " << fmt9(cfg.nlms_threshold) << ",\n";
    j << "    \"mlp_hidden\": " << cfg.mlp_hidden << ",\n";
    j << "    \"mlp_learning_rate\": " << fmt9(cfg.mlp_learning_rate) << ",\n";
    j << "    \"mlp_max_epochs\": " << cfg.mlp_max_epochs << ",\n";
    j << "    \"mlp_patience\": " << cfg.mlp_patience << "\n";
    j << "  },\n";
    j << "  \"training_trials\": " << summary.training_trials << ",\n";
    j << "  \"evaluation_trials\": " << summary.evaluation_trials << ",\n";
    j << "  \"fusers\": [\n";
    for (std::size_t i = 0; i < summary.fusers.size(); ++i) {
        const FuserResult& fr = summary.fusers[i];
        const std::string name = sanitize_name(fr.spec.name);
        const auto& cm = fr.confusion_matrix;
        j << "    {\n";
        j << "      \"name\": \"" << json_escape(fr.spec.name) << "\",\n";
        j << "      \"auc\": " << fmt9(fr.auc_value) << ",\n";
        j << "      \"detection_rate\": " << fmt9(fr.detection_rate) << ",\n";
        j << "      \"false_alarm_rate\": " << fmt9(fr.false_alarm_rate) << ",\n";
        j << "      \"confusion\": {\"true_positive\": " << cm.true_positive
          << ", \"false_positive\": " << cm.false_positive
          << ", \"false_negative\": " << cm.false_negative
          << ", \"true_negative\": " << cm.true_negative
          << ", \"accuracy\": " << fmt9(cm.accuracy()) << "},\n";
        j << "      \"roc_file\": \"roc_" << name << ".csv\",\n";
        j << "      \"confusion_file\": \"confusion_" << name << ".csv\"";
        if (fr.has_training_record) {
            j << ",\n      \"training_file\": \"training_" << name << ".csv\",\n";
            j << "      \"training\": {\"epochs\": " << fr.training.train_mse.size()
              << ", \"stop_epoch\": " << fr.training.stop_epoch
              << ", \"best_validation_mse\": " << fmt9(fr.training.best_validation_mse) << "}\n";
        } else {
            j << "\n";
        }
        j << "    }" << (i + 1 < summary.fusers.size() ? "," : "") << "\n";
    }
    j << "  ]\n";
    j << "}\n";
    return j.str();
}

std::vector<std::string> emit_outputs(const RunSummary& summary, const std::string& out_dir) {
    namespace fs = std::filesystem;

    if (summary.fusers.empty()) throw InputError("emit_outputs: summary holds no fuser results");
    if (summary.evaluation_trials == 0)
        throw InputError("emit_outputs: summary has no evaluation trials");

    // Render and validate everything before touching the filesystem.
    std::vector<std::pair<std::string, std::string>> files;  // name -> content
    for (const FuserResult& fr : summary.fusers) {
        const std::string name = sanitize_name(fr.spec.name);
        validate_curve(fr.roc, fr.spec.name);
        if (!(fr.auc_value >= 0.0 && fr.auc_value <= 1.0) ||
            !(fr.detection_rate >= 0.0 && fr.detection_rate <= 1.0) ||
            !(fr.false_alarm_rate >= 0.0 && fr.false_alarm_rate <= 1.0))
            throw InputError("emit_outputs: rates for '" + fr.spec.name + "' out of [0,1]");
        if (fr.confusion_matrix.total() != summary.evaluation_trials)
            throw InputError("emit_outputs: confusion counts for '" + fr.spec.name +
                             "' do not sum to the evaluation trial count");
        files.emplace_back("roc_" + name + ".csv", render_roc_csv(fr.roc));
        files.emplace_back("confusion_" + name + ".csv", render_confusion_csv(fr.confusion_matrix));
        if (fr.has_training_record)
            files.emplace_back("training_" + name + ".csv", render_training_csv(fr.training));
    }
    files.emplace_back("summary.json", render_summary_json(summary));

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

    std::vector<std::string> written;
    try {
        for (const auto& [name, content] : files) {
            const fs::path path = fs::path(out_dir) / name;
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
            out << content;
            if (!out) throw IoError("short write to '" + path.string() + "'");
            out.close();
            written.push_back(path.string());
        }
    } catch (...) {
        for (const auto& p : written) fs::remove(p, ec);
        throw;
    }
    return written;
}

}  // namespace cogsense
