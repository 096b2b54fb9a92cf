#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "cogsense/errors.hpp"
#include "cogsense/fusion.hpp"
#include "cogsense/rng.hpp"

using namespace cogsense;

namespace {

std::vector<FusionInput> replicated_patterns(const std::vector<std::vector<double>>& patterns,
                                             const std::vector<int>& labels, int copies) {
    std::vector<FusionInput> rows;
    for (int c = 0; c < copies; ++c)
        for (std::size_t p = 0; p < patterns.size(); ++p)
            rows.push_back(FusionInput::from_user_features(patterns[p], labels[p], rows.size()));
    return rows;
}

}  // namespace

// ===== hard rules ============================================================

TEST_CASE("hard rule truth-table spot checks") {
    const std::vector<int> v110{1, 1, 0};
    CHECK(fuse_majority(v110) == 1);
    CHECK(fuse_and(v110) == 0);
    CHECK(fuse_or(std::vector<int>{0, 0, 0}) == 0);
    CHECK(fuse_majority(std::vector<int>{1, 1, 0, 0}) == 0);  // even-M tie -> absent
    CHECK(fuse_k_of_m(std::vector<int>{1, 0, 1, 1}, 3) == 1);
    CHECK_THROWS_AS(fuse_k_of_m(std::vector<int>{1, 0}, 3), ConfigError);
    CHECK_THROWS_AS(fuse_k_of_m(std::vector<int>{1, 0}, 0), ConfigError);
}

TEST_CASE("rule nesting and monotonicity for small M") {
    for (std::size_t m = 1; m <= 8; ++m) {
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            std::vector<int> bits(m);
            for (std::size_t i = 0; i < m; ++i) bits[i] = (mask >> i) & 1u;
            const int a = fuse_and(bits), mj = fuse_majority(bits), o = fuse_or(bits);
            CHECK(a <= mj);
            CHECK(mj <= o);
            CHECK(a == fuse_k_of_m(bits, m));
            CHECK(o == fuse_k_of_m(bits, 1));
            CHECK(mj == fuse_k_of_m(bits, majority_k(m)));
            // flipping any 0 to 1 never drops the output
            for (std::size_t k = 1; k <= m; ++k) {
                const int base = fuse_k_of_m(bits, k);
                for (std::size_t i = 0; i < m; ++i) {
                    if (bits[i]) continue;
                    auto up = bits;
                    up[i] = 1;
                    CHECK(fuse_k_of_m(up, k) >= base);
                }
            }
        }
    }
}

// ===== NLMS adaline ==========================================================

TEST_CASE("nlms single-step hand examples") {
    AdaptiveFuser f(2, 0.5);
    FusionInput in;
    in.features = {1.0, 0.0};
    in.label = 1;
    const double e = f.nlms_step(in);
    CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.weights()[0] == doctest::Approx(0.5).epsilon(1e-9));  // eps guard shifts ~5e-13
    CHECK(f.weights()[1] == 0.0);
    CHECK(f.update_count() == 1);

    // perfect prediction is a fixed point
    AdaptiveFuser g(2, 0.7);
    g.mutable_weights() = {1.0, 0.0};
    FusionInput in2;
    in2.features = {1.0, 0.0};
    in2.label = 1;
    CHECK(g.nlms_step(in2) == 0.0);
    CHECK(g.weights()[0] == 1.0);
    CHECK(g.weights()[1] == 0.0);
}

TEST_CASE("nlms validates step size and dimensions") {
    CHECK_THROWS_AS(AdaptiveFuser(3, 0.0), ConfigError);
    CHECK_THROWS_AS(AdaptiveFuser(3, 2.0), ConfigError);
    CHECK_THROWS_AS(AdaptiveFuser(3, -0.1), ConfigError);
    AdaptiveFuser f(3, 0.5);
    FusionInput bad;
    bad.features = {1.0, 2.0};
    bad.label = 0;
    CHECK_THROWS_AS(f.nlms_step(bad), UsageError);
    CHECK_THROWS_AS(f.predict(std::vector<double>{1.0}), UsageError);
}

TEST_CASE("nlms converges on a separable stationary stream") {
    // Two tight clusters at -1/+1 per feature; alpha = 0.5, 1e4 steps. The
    // within-class spread is small enough that the residual error after
    // convergence is far below the startup transient.
    RandomStream rng(77);
    AdaptiveFuser f(5, 0.5);
    const std::size_t steps = 10000;
    double first = 0.0, last = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        const int label = rng.bernoulli(0.5) ? 1 : 0;
        const double mu = label ? 1.0 : -1.0;
        FusionInput in;
        in.features.resize(5);
        for (int i = 0; i < 4; ++i) in.features[i] = mu + 0.01 * rng.gaussian();
        in.features[4] = 1.0;
        in.label = label;
        const double e = f.nlms_step(in);
        if (k < steps / 10) first += e * e;
        if (k >= steps - steps / 10) last += e * e;
    }
    CHECK(last < 0.1 * first);
}

TEST_CASE("nlms weights stay bounded over 1e6 steps") {
    RandomStream rng(78);
    AdaptiveFuser f(4, 1.5);  // near the top of the stable range
    double max_w = 0.0;
    for (std::size_t k = 0; k < 1000000; ++k) {
        const int label = rng.bernoulli(0.5) ? 1 : 0;
        FusionInput in;
        in.features = {rng.gaussian() + label, rng.gaussian() - label, rng.gaussian(), 1.0};
        in.label = label;
        f.nlms_step(in);
        for (double w : f.weights()) max_w = std::max(max_w, std::abs(w));
    }
    // Bound measured once on this stream/seed and frozen with slack.
    CHECK(max_w < 3.0);
}

TEST_CASE("adaline decision is invariant to positive rescaling of (W, theta)") {
    AdaptiveFuser f(3, 0.5, 0.5);
    f.mutable_weights() = {0.8, -0.3, 0.1};
    AdaptiveFuser g(3, 0.5, 0.5 * 7.5);
    g.mutable_weights() = {0.8 * 7.5, -0.3 * 7.5, 0.1 * 7.5};
    RandomStream rng(79);
    for (int i = 0; i < 200; ++i) {
        const std::vector<double> y{rng.gaussian(), rng.gaussian(), 1.0};
        CHECK(f.predict(y).second == g.predict(y).second);
    }

    // spot values: W=[1,0], Y=[0.9, 1(bias)] -> r=0.9, bit=1; zero weights -> bit=0
    AdaptiveFuser h(2, 0.5, 0.5);
    h.mutable_weights() = {1.0, 0.0};
    const auto [r, bit] = h.predict(std::vector<double>{0.9, 1.0});
    CHECK(r == doctest::Approx(0.9));
    CHECK(bit == 1);
    AdaptiveFuser z(2, 0.5, 0.5);
    CHECK(z.predict(std::vector<double>{123.0, 1.0}).second == 0);
}

TEST_CASE("nlms serialization round trip is lossless") {
    AdaptiveFuser f(3, 0.25, 0.4);
    RandomStream rng(80);
    for (int k = 0; k < 500; ++k) {
        FusionInput in;
        in.features = {rng.gaussian(), rng.gaussian(), 1.0};
        in.label = rng.bernoulli(0.5) ? 1 : 0;
        f.nlms_step(in);
    }
    const auto g = AdaptiveFuser::from_json(f.to_json());
    CHECK(g.weights() == f.weights());
    CHECK(g.step_size() == f.step_size());
    CHECK(g.threshold() == f.threshold());
    CHECK(g.update_count() == f.update_count());
}

// ===== MLP ===================================================================

TEST_CASE("mlp learns the 3-input majority function") {
    const std::vector<std::vector<double>> pats{{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1},
                                                {1, 0, 0}, {1, 0, 1}, {1, 1, 0}, {1, 1, 1}};
    std::vector<int> labels;
    for (const auto& p : pats) labels.push_back(p[0] + p[1] + p[2] >= 2 ? 1 : 0);
    const auto rows = replicated_patterns(pats, labels, 25);

    MlpOptions opt;
    opt.hidden_units = 10;
    opt.learning_rate = 2.0;
    opt.max_epochs = 3000;
    opt.patience = 300;
    opt.seed = 5;
    const MlpFuser net = train_mlp(rows, opt);
    REQUIRE(net.trained());
    for (std::size_t p = 0; p < pats.size(); ++p) {
        const auto [score, bit] = net.predict(pats[p], 0.5);
        CHECK(score > 0.0);
        CHECK(score < 1.0);
        CHECK(bit == labels[p]);
    }
    const auto one = net.predict(std::vector<double>{1, 1, 1}, 0.5);
    CHECK(one.second == 1);
}

TEST_CASE("mlp learns XOR with 10 hidden units") {
    const std::vector<std::vector<double>> pats{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    const std::vector<int> labels{0, 1, 1, 0};
    const auto rows = replicated_patterns(pats, labels, 50);

    MlpOptions opt;
    opt.hidden_units = 10;
    opt.learning_rate = 2.0;
    opt.max_epochs = 6000;
    opt.patience = 600;
    opt.seed = 11;
    const MlpFuser net = train_mlp(rows, opt);
    for (std::size_t p = 0; p < pats.size(); ++p)
        CHECK(net.predict(pats[p], 0.5).second == labels[p]);
}

TEST_CASE("mlp threshold endpoints force constant decisions") {
    const std::vector<std::vector<double>> pats{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    const std::vector<int> labels{0, 1, 1, 0};
    MlpOptions opt;
    opt.max_epochs = 50;
    opt.seed = 3;
    const MlpFuser net = train_mlp(replicated_patterns(pats, labels, 25), opt);
    for (const auto& p : pats) {
        CHECK(net.predict(p, 0.0).second == 1);
        CHECK(net.predict(p, 1.0).second == 0);
    }
}

TEST_CASE("mlp with max_epochs=0 is flagged untrained") {
    const std::vector<std::vector<double>> pats{{0, 0}, {1, 1}};
    const std::vector<int> labels{0, 1};
    MlpOptions opt;
    opt.max_epochs = 0;
    const MlpFuser net = train_mlp(replicated_patterns(pats, labels, 10), opt);
    CHECK_FALSE(net.trained());
    CHECK(net.record().train_mse.empty());
    CHECK_THROWS_AS(net.predict(std::vector<double>{0.0, 0.0}, 0.5), UsageError);
}

TEST_CASE("mlp rejects single-class training data and bad splits") {
    const std::vector<std::vector<double>> pats{{0, 0}, {1, 1}};
    MlpOptions opt;
    CHECK_THROWS_AS(train_mlp(replicated_patterns(pats, {1, 1}, 10), opt), InputError);
    opt.train_fraction = 0.5;  // fractions now sum to 0.8
    CHECK_THROWS_AS(train_mlp(replicated_patterns(pats, {0, 1}, 10), opt), ConfigError);
}

TEST_CASE("mlp analytic gradient matches central finite differences") {
    RandomStream rng(13);
    std::vector<FusionInput> rows;
    for (int i = 0; i < 60; ++i) {
        std::vector<double> f{rng.gaussian(), rng.gaussian(), rng.gaussian()};
        rows.push_back(FusionInput::from_user_features(f, rng.bernoulli(0.5) ? 1 : 0, i));
    }
    MlpOptions opt;
    opt.hidden_units = 4;
    opt.max_epochs = 1;
    opt.learning_rate = 0.1;
    opt.seed = 17;
    MlpFuser net = train_mlp(rows, opt);

    for (int point = 0; point < 10; ++point) {
        auto params = net.parameters();
        for (auto& p : params) p = rng.gaussian();
        net.set_parameters(params);

        const auto analytic = net.loss_gradient(rows);
        std::vector<double> fd(analytic.size());
        for (std::size_t i = 0; i < params.size(); ++i) {
            const double h = 1e-5 * std::max(1.0, std::abs(params[i]));
            auto plus = params, minus = params;
            plus[i] += h;
            minus[i] -= h;
            net.set_parameters(plus);
            const double fp = net.mse(rows);
            net.set_parameters(minus);
            const double fm = net.mse(rows);
            fd[i] = (fp - fm) / (2.0 * h);
            net.set_parameters(params);
        }
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < fd.size(); ++i) {
            num += (analytic[i] - fd[i]) * (analytic[i] - fd[i]);
            den += analytic[i] * analytic[i] + fd[i] * fd[i];
        }
        CHECK(std::sqrt(num) <= 1e-6 * std::sqrt(den));
    }
}

TEST_CASE("mlp training is deterministic in (dataset order, seed)") {
    RandomStream rng(19);
    std::vector<FusionInput> rows;
    for (int i = 0; i < 100; ++i) {
        std::vector<double> f{rng.gaussian(), rng.gaussian()};
        rows.push_back(FusionInput::from_user_features(f, rng.bernoulli(0.5) ? 1 : 0, i));
    }
    MlpOptions opt;
    opt.max_epochs = 40;
    opt.seed = 23;
    const MlpFuser a = train_mlp(rows, opt);
    const MlpFuser b = train_mlp(rows, opt);
    CHECK(a.parameters() == b.parameters());
    CHECK(a.record().train_mse == b.record().train_mse);
}

TEST_CASE("mlp serialization round trip preserves predictions exactly") {
    RandomStream rng(29);
    std::vector<FusionInput> rows;
    for (int i = 0; i < 120; ++i) {
        std::vector<double> f{rng.gaussian(), rng.gaussian(), rng.gaussian()};
        rows.push_back(
            FusionInput::from_user_features(f, f[0] + f[1] > 0 ? 1 : 0, i));
    }
    MlpOptions opt;
    opt.max_epochs = 60;
    opt.seed = 31;
    const MlpFuser net = train_mlp(rows, opt);
    const MlpFuser back = MlpFuser::from_json(net.to_json());
    CHECK(back.parameters() == net.parameters());
    for (int i = 0; i < 20; ++i) {
        const std::vector<double> f{rng.gaussian(), rng.gaussian(), rng.gaussian()};
        CHECK(back.predict(f, 0.5).first == net.predict(f, 0.5).first);
    }
}

TEST_CASE("training record tracks epochs and early stopping") {
    RandomStream rng(37);
    std::vector<FusionInput> rows;
    for (int i = 0; i < 300; ++i) {
        std::vector<double> f{rng.gaussian(), rng.gaussian()};
        rows.push_back(FusionInput::from_user_features(f, f[0] > 0 ? 1 : 0, i));
    }
    MlpOptions opt;
    opt.max_epochs = 500;
    opt.patience = 6;
    opt.seed = 41;
    const MlpFuser net = train_mlp(rows, opt);
    const auto& rec = net.record();
    REQUIRE(!rec.train_mse.empty());
    CHECK(rec.train_mse.size() == rec.validation_mse.size());
    CHECK(rec.train_mse.size() == rec.gradient_norm.size());
    CHECK(rec.stop_epoch >= 1);
    CHECK(rec.stop_epoch <= rec.train_mse.size());
    for (double v : rec.train_mse) CHECK(v >= 0.0);
    for (double v : rec.validation_mse) CHECK(v >= 0.0);
}
