// Command-line front end: seeded cooperative-sensing experiments, theoretical
// detection curves, adaptive-fuser training, and summary inspection.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cogsense/config.hpp"
#include "cogsense/detector.hpp"
#include "cogsense/errors.hpp"
#include "cogsense/experiment.hpp"
#include "cogsense/log.hpp"

namespace {

using namespace cogsense;

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void apply_overrides(ScenarioConfig& cfg, const std::optional<std::uint64_t>& seed,
                     const std::string& fusers_csv) {
    if (seed) {
        cfg.seed = *seed;
        cfg.seed_set = true;
    }
    if (!fusers_csv.empty()) {
        cfg.fusers.clear();
        std::stringstream ss(fusers_csv);
        std::string item;
        while (std::getline(ss, item, ',')) cfg.fusers.push_back(parse_fuser(item));
    }
    cfg.validate();
}

LoadedFusers load_fuser_files(const std::vector<std::string>& paths) {
    LoadedFusers loaded;
    for (const auto& path : paths) {
        const std::string text = read_file(path);
        const auto j = nlohmann::json::parse(text);
        const std::string type = j.value("type", "");
        if (type == "nlms")
            loaded.nlms = AdaptiveFuser::from_json(text);
        else if (type == "mlp")
            loaded.mlp = MlpFuser::from_json(text);
        else
            throw InputError("fuser file '" + path + "' has unknown type '" + type + "'");
    }
    return loaded;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed, const std::string& fusers_csv,
                 unsigned threads, const std::vector<std::string>& fuser_files) {
    ScenarioConfig cfg = load_config(config_path);
    apply_overrides(cfg, seed, fusers_csv);

    const LoadedFusers loaded = load_fuser_files(fuser_files);
    const RunSummary summary = run_experiment(cfg, threads, &loaded);
    const auto written = emit_outputs(summary, out_dir);

    std::cout << "wrote " << written.size() << " files to " << out_dir << "\n";
    for (const FuserResult& fr : summary.fusers) {
        std::cout << "  " << fr.spec.name << ": auc=" << fmt9(fr.auc_value)
                  << " pd=" << fmt9(fr.detection_rate) << " pfa=" << fmt9(fr.false_alarm_rate)
                  << "\n";
    }
    return 0;
}

int cmd_roc(const std::string& grid, const std::vector<double>& snr_db, std::size_t n_samples,
            double noise_variance, bool include_printed, const std::string& out_path) {
    double lo = 0.0, hi = 0.0;
    std::size_t count = 0;
    {
        std::stringstream ss(grid);
        std::string a, b, c;
        if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
            throw ConfigError("--pfa-grid expects LO:HI:COUNT, got '" + grid + "'");
        lo = std::stod(a);
        hi = std::stod(b);
        count = std::stoul(c);
    }
    if (!(lo > 0.0 && hi < 1.0 && lo <= hi))
        throw ConfigError("--pfa-grid bounds must satisfy 0 < LO <= HI < 1");
    if (count < 1) throw ConfigError("--pfa-grid COUNT must be >= 1");
    if (snr_db.empty()) throw ConfigError("--snr-db requires at least one value");

    std::string out = "p_fa";
    for (double s : snr_db) {
        out += ",p_d_snr_" + fmt9(s) + "db";
        if (include_printed) out += ",p_d_printed_snr_" + fmt9(s) + "db";
    }
    out += '\n';
    const double sigma = std::sqrt(noise_variance);
    for (std::size_t i = 0; i < count; ++i) {
        const double pfa =
            count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        out += fmt9(pfa);
        for (double s : snr_db) {
            const double snr = std::pow(10.0, s / 10.0);
            out += ',' + fmt9(pd_theoretical(pfa, snr, n_samples));
            if (include_printed) out += ',' + fmt9(pd_as_printed(pfa, snr, sigma, n_samples));
        }
        out += '\n';
    }

    if (out_path == "-") {
        std::cout << out;
    } else {
        std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open '" + out_path + "' for writing");
        f << out;
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_train(const std::string& config_path, const std::string& out_dir,
              std::optional<std::uint64_t> seed, const std::string& fusers_csv,
              unsigned threads) {
    ScenarioConfig cfg = load_config(config_path);
    apply_overrides(cfg, seed, fusers_csv);

    const auto fusers = train_fusers(cfg, threads);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());
    for (const auto& [name, body] : fusers) {
        const auto path = std::filesystem::path(out_dir) / ("fuser_" + name + ".json");
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
        f << body;
        std::cout << "wrote " << path.string() << "\n";
    }
    return 0;
}

int cmd_report(const std::string& summary_path) {
    const auto j = nlohmann::json::parse(read_file(summary_path));
    std::cout << "summary " << summary_path << " (schema " << j.value("schema_version", "?")
              << ")\n";
    std::cout << "  seed " << j.value("seed", 0ULL) << ", trials "
              << j["config"].value("trials", 0ULL) << " (" << j.value("training_trials", 0ULL)
              << " train / " << j.value("evaluation_trials", 0ULL) << " eval)\n";
    std::cout << "  users " << j["config"].value("m_users", 0ULL) << ", N "
              << j["config"].value("n_samples", 0ULL) << ", report mode "
              << j["config"].value("report_mode", std::string("?")) << "\n";
    for (const auto& f : j["fusers"]) {
        std::cout << "  " << f.value("name", "?") << ": auc " << f.value("auc", 0.0)
                  << ", detection " << f.value("detection_rate", 0.0) << ", false alarm "
                  << f.value("false_alarm_rate", 0.0) << ", accuracy "
                  << f["confusion"].value("accuracy", 0.0) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cogsense: cooperative spectrum sensing Monte Carlo toolkit"};
    app.require_subcommand(1);

    // simulate
    std::string sim_config, sim_out, sim_fusers;
    std::optional<std::uint64_t> sim_seed;
    unsigned sim_threads = 1;
    std::vector<std::string> sim_fuser_files;
    auto* sim = app.add_subcommand("simulate", "run a seeded experiment and emit result files");
    sim->add_option("--config", sim_config, "scenario config file")->required();
    sim->add_option("--out", sim_out, "output directory")->required();
    sim->add_option("--seed", sim_seed, "override the config seed");
    sim->add_option("--fusers", sim_fusers, "comma list overriding the config fusers");
    sim->add_option("--threads", sim_threads, "worker threads (speed only, never results)");
    sim->add_option("--load-fuser", sim_fuser_files,
                    "trained fuser JSON to use instead of training (repeatable)");

    // roc
    std::string roc_grid = "0.01:0.99:99", roc_out = "-";
    std::vector<double> roc_snr;
    std::size_t roc_n = 1000;
    double roc_noise_var = 1.0;
    bool roc_printed = false;
    auto* roc = app.add_subcommand("roc", "theoretical detection curves over a Pf grid");
    roc->add_option("--pfa-grid", roc_grid, "Pf grid as LO:HI:COUNT");
    roc->add_option("--snr-db", roc_snr, "SNR values in dB (repeat or comma-separate)")
        ->required()
        ->delimiter(',');
    roc->add_option("--n", roc_n, "time-bandwidth product N");
    roc->add_option("--noise-variance", roc_noise_var, "noise variance (printed-form column)");
    roc->add_flag("--printed", roc_printed, "also emit the uncorrected printed-form column");
    roc->add_option("--out", roc_out, "output CSV path ('-' for stdout)");

    // train
    std::string train_config, train_out, train_fusers_csv;
    std::optional<std::uint64_t> train_seed;
    unsigned train_threads = 1;
    auto* train = app.add_subcommand("train", "fit adaptive fusers and save their parameters");
    train->add_option("--config", train_config, "scenario config file")->required();
    train->add_option("--out", train_out, "output directory")->required();
    train->add_option("--seed", train_seed, "override the config seed");
    train->add_option("--fusers", train_fusers_csv, "comma list overriding the config fusers");
    train->add_option("--threads", train_threads, "worker threads");

    // report
    std::string report_summary;
    auto* report = app.add_subcommand("report", "print a saved summary.json to the console");
    report->add_option("--summary", report_summary, "path to summary.json")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(sim_config, sim_out, sim_seed, sim_fusers, sim_threads,
                                sim_fuser_files);
        if (roc->parsed())
            return cmd_roc(roc_grid, roc_snr, roc_n, roc_noise_var, roc_printed, roc_out);
        if (train->parsed())
            return cmd_train(train_config, train_out, train_seed, train_fusers_csv, train_threads);
        if (report->parsed()) return cmd_report(report_summary);
    } catch (const std::exception& e) {
        cogsense::log_error(e.what());
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
