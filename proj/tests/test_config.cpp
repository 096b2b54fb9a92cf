#include <doctest.h>

#include <string>

#include "cogsense/config.hpp"
#include "cogsense/errors.hpp"

using namespace cogsense;

namespace {
ScenarioConfig parse(const std::string& text) { return parse_config_text(text, "<test>"); }
}  // namespace

TEST_CASE("minimal config fills documented defaults") {
    const auto cfg = parse(
        "m_users = 3\n"
        "snr_db = -10,-10,-10\n"
        "trials = 100\n"
        "seed = 1\n");
    CHECK(cfg.m_users == 3);
    CHECK(cfg.n_samples == 1000);
    CHECK(cfg.noise_variance == 1.0);
    CHECK(cfg.target_pfa == 0.1);
    CHECK(cfg.report_mode == ReportMode::hard);
    CHECK(cfg.reporting.fading_variance == 1.0);
    CHECK(cfg.reporting.noise_variance == doctest::Approx(0.31622776601683794));
    CHECK(cfg.reporting.csi_known);
    CHECK(cfg.fading_doppler_hz == 100.0);
    CHECK(cfg.fading_sample_interval_s == 1e-5);
    REQUIRE(cfg.fusers.size() == 1);
    CHECK(cfg.fusers[0].kind == FuserKind::majority);
    CHECK(cfg.trials == 100);
    CHECK(cfg.seed == 1);
    CHECK(cfg.train_fraction == 0.5);
}

TEST_CASE("comments, blank lines and full key set parse") {
    const auto cfg = parse(
        "# scenario\n"
        "m_users = 5\n"
        "n_samples = 500\n"
        "snr_db = -5, -8, -10, -12, -15\n"
        "noise_variance = 2.0\n"
        "target_pfa = 0.05\n"
        "report_mode = soft\n"
        "reporting = 1.0, 0.5, true\n"
        "fading = 80, 2e-5\n"
        "fuser = majority, k_of_m:2, nlms, mlp\n"
        "trials = 5000   # Monte Carlo size\n"
        "seed = 77\n"
        "train_fraction = 0.6\n"
        "nlms_step = 0.1\n"
        "nlms_epochs = 3\n"
        "mlp_hidden = 8\n"
        "mlp_learning_rate = 0.5\n"
        "mlp_max_epochs = 100\n"
        "mlp_patience = 10\n");
    CHECK(cfg.n_samples == 500);
    CHECK(cfg.report_mode == ReportMode::soft);
    REQUIRE(cfg.fusers.size() == 4);
    CHECK(cfg.fusers[1].kind == FuserKind::k_of_m);
    CHECK(cfg.fusers[1].k == 2);
    CHECK(cfg.fusers[2].kind == FuserKind::nlms);
    CHECK(cfg.mlp_hidden == 8);
    CHECK(cfg.training_trials() == 3000);
    CHECK(cfg.evaluation_trials() == 2000);
}

TEST_CASE("violations name the offending key") {
    const std::string base =
        "m_users = 3\nsnr_db = -10,-10,-10\ntrials = 100\nseed = 1\n";

    SUBCASE("snr list length") {
        try {
            parse("m_users = 3\nsnr_db = -10,-10\ntrials = 100\nseed = 1\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("snr_db") != std::string::npos);
        }
    }
    SUBCASE("target_pfa domain") {
        try {
            parse(base + "target_pfa = 1.5\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("target_pfa") != std::string::npos);
            CHECK(msg.find("(0,1)") != std::string::npos);
        }
    }
    SUBCASE("unknown key") {
        try {
            parse(base + "bogus_key = 7\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
        }
    }
    SUBCASE("odd n_samples") {
        CHECK_THROWS_AS(parse(base + "n_samples = 501\n"), ConfigError);
    }
    SUBCASE("k out of range") {
        CHECK_THROWS_AS(parse(base + "fuser = k_of_m:9\n"), ConfigError);
    }
    SUBCASE("missing required keys") {
        CHECK_THROWS_AS(parse("m_users = 3\n"), ConfigError);
        CHECK_THROWS_AS(parse("snr_db = -1\ntrials = 10\nseed = 1\n"), ConfigError);
    }
    SUBCASE("bad fuser token") {
        CHECK_THROWS_AS(parse(base + "fuser = quorum\n"), ConfigError);
    }
    SUBCASE("nlms step domain") {
        CHECK_THROWS_AS(parse(base + "fuser = nlms\nnlms_step = 2.5\n"), ConfigError);
    }
    SUBCASE("no-CSI hard rules rejected") {
        CHECK_THROWS_AS(parse(base + "reporting = 1,1,false\n"), ConfigError);
        // soft mode + adaptive fusers without CSI is allowed
        const auto ok = parse(base + "reporting = 1,1,false\nreport_mode = soft\nfuser = nlms,mlp\n");
        CHECK_FALSE(ok.reporting.csi_known);
    }
}

TEST_CASE("missing file errors name the path") {
    try {
        load_config("/nonexistent/cogsense.cfg");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/cogsense.cfg") != std::string::npos);
    }
}
