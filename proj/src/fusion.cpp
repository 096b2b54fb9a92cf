#include "cogsense/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "cogsense/errors.hpp"

namespace cogsense {

using nlohmann::json;

FusionInput FusionInput::from_user_features(std::span<const double> user_features, int label,
                                            std::size_t time_index) {
    FusionInput in;
    in.features.assign(user_features.begin(), user_features.end());
    in.features.push_back(1.0);
    in.label = label;
    in.time_index = time_index;
    return in;
}

// ---- Hard rules -------------------------------------------------------------

int fuse_k_of_m(std::span<const int> bits, std::size_t k) {
    if (bits.empty()) throw ConfigError("fuse_k_of_m: need at least one bit");
    if (k < 1 || k > bits.size())
        throw ConfigError("fuse_k_of_m: k must lie in [1, M], got k=" + std::to_string(k) +
                          " with M=" + std::to_string(bits.size()));
    std::size_t count = 0;
    for (int b : bits) count += (b != 0);
    return count >= k ? 1 : 0;
}

std::size_t majority_k(std::size_t m_users) {
    return (m_users + 2) / 2;  // ceil((M+1)/2)
}

int fuse_and(std::span<const int> bits) { return fuse_k_of_m(bits, bits.size()); }
int fuse_or(std::span<const int> bits) { return fuse_k_of_m(bits, 1); }
int fuse_majority(std::span<const int> bits) { return fuse_k_of_m(bits, majority_k(bits.size())); }

// ---- NLMS adaline ------------------------------------------------------------

AdaptiveFuser::AdaptiveFuser(std::size_t dimension, double step_size, double threshold)
    : weights_(dimension, 0.0), step_size_(step_size), threshold_(threshold) {
    if (dimension < 1) throw ConfigError("AdaptiveFuser: dimension must be >= 1");
    if (!(step_size > 0.0 && step_size < 2.0))
        throw ConfigError("AdaptiveFuser: step_size must lie in (0,2), got " +
                          std::to_string(step_size));
}

double AdaptiveFuser::nlms_step(const FusionInput& input) {
    if (input.features.size() != weights_.size())
        throw UsageError("nlms_step: feature dimension " + std::to_string(input.features.size()) +
                         " != weight dimension " + std::to_string(weights_.size()));

    double r = 0.0, norm2 = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        r += weights_[i] * input.features[i];
        norm2 += input.features[i] * input.features[i];
    }
    const double error = static_cast<double>(input.label) - r;
    const double gain = step_size_ * error / (norm2 + kNlmsEpsilon);
    for (std::size_t i = 0; i < weights_.size(); ++i) weights_[i] += gain * input.features[i];
    ++update_count_;
    return error;
}

std::pair<double, int> AdaptiveFuser::predict(std::span<const double> features) const {
    if (features.size() != weights_.size())
        throw UsageError("predict: feature dimension " + std::to_string(features.size()) +
                         " != weight dimension " + std::to_string(weights_.size()));
    double r = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) r += weights_[i] * features[i];
    return {r, r > threshold_ ? 1 : 0};
}

std::string AdaptiveFuser::to_json() const {
    json j;
    j["type"] = "nlms";
    j["weights"] = weights_;
    j["step_size"] = step_size_;
    j["threshold"] = threshold_;
    j["update_count"] = update_count_;
    return j.dump(2);
}

AdaptiveFuser AdaptiveFuser::from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.value("type", "") != "nlms")
        throw InputError("AdaptiveFuser::from_json: not an nlms fuser file");
    const auto w = j.at("weights").get<std::vector<double>>();
    AdaptiveFuser f(w.size(), j.at("step_size").get<double>(), j.at("threshold").get<double>());
    f.weights_ = w;
    f.update_count_ = j.value("update_count", std::size_t{0});
    return f;
}

// ---- MLP ----------------------------------------------------------------------

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct SplitView {
    std::span<const FusionInput> train, validation, test;
};

SplitView split_dataset(std::span<const FusionInput> data, const MlpOptions& opt) {
    const double sum = opt.train_fraction + opt.validation_fraction + opt.test_fraction;
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("train/validation/test fractions must sum to 1, got " +
                          std::to_string(sum));
    const std::size_t n = data.size();
    const std::size_t n_train = static_cast<std::size_t>(opt.train_fraction * n);
    const std::size_t n_val = static_cast<std::size_t>(opt.validation_fraction * n);
    SplitView sv;
    sv.train = data.subspan(0, n_train);
    sv.validation = data.subspan(n_train, n_val);
    sv.test = data.subspan(n_train + n_val);
    return sv;
}

}  // namespace

double MlpFuser::forward(std::span<const double> user_features) const {
    double out = b2_;
    for (std::size_t h = 0; h < hidden_units_; ++h) {
        double a = b1_[h];
        for (std::size_t i = 0; i < inputs_; ++i) {
            const double z = (user_features[i] - feat_mean_[i]) * feat_scale_[i];
            a += w1_[h * inputs_ + i] * z;
        }
        out += w2_[h] * sigmoid(a);
    }
    return sigmoid(out);
}

std::pair<double, int> MlpFuser::predict(std::span<const double> user_features,
                                         double threshold) const {
    if (!trained_) throw UsageError("MlpFuser::predict: network is untrained");
    std::span<const double> feats = user_features;
    if (feats.size() == inputs_ + 1) feats = feats.subspan(0, inputs_);  // drop bias entry
    if (feats.size() != inputs_)
        throw UsageError("MlpFuser::predict: expected " + std::to_string(inputs_) +
                         " features, got " + std::to_string(feats.size()));
    const double score = forward(feats);
    return {score, score > threshold ? 1 : 0};
}

double MlpFuser::mse(std::span<const FusionInput> data) const {
    if (data.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& row : data) {
        std::span<const double> f(row.features.data(), inputs_);
        const double e = forward(f) - static_cast<double>(row.label);
        acc += e * e;
    }
    return acc / static_cast<double>(data.size());
}

std::vector<double> MlpFuser::parameters() const {
    std::vector<double> flat;
    flat.reserve(w1_.size() + b1_.size() + w2_.size() + 1);
    flat.insert(flat.end(), w1_.begin(), w1_.end());
    flat.insert(flat.end(), b1_.begin(), b1_.end());
    flat.insert(flat.end(), w2_.begin(), w2_.end());
    flat.push_back(b2_);
    return flat;
}

void MlpFuser::set_parameters(std::span<const double> flat) {
    const std::size_t expected = w1_.size() + b1_.size() + w2_.size() + 1;
    if (flat.size() != expected)
        throw UsageError("set_parameters: expected " + std::to_string(expected) + " values");
    std::size_t k = 0;
    for (auto& v : w1_) v = flat[k++];
    for (auto& v : b1_) v = flat[k++];
    for (auto& v : w2_) v = flat[k++];
    b2_ = flat[k];
}

std::vector<double> MlpFuser::loss_gradient(std::span<const FusionInput> data) const {
    // d/dtheta of mean_k (o_k - d_k)^2 with sigmoid hidden and output units.
    std::vector<double> g(w1_.size() + b1_.size() + w2_.size() + 1, 0.0);
    if (data.empty()) return g;
    double* gw1 = g.data();
    double* gb1 = gw1 + w1_.size();
    double* gw2 = gb1 + b1_.size();
    double* gb2 = gw2 + w2_.size();

    std::vector<double> hidden(hidden_units_), z(inputs_);
    const double scale = 2.0 / static_cast<double>(data.size());
    for (const auto& row : data) {
        for (std::size_t i = 0; i < inputs_; ++i)
            z[i] = (row.features[i] - feat_mean_[i]) * feat_scale_[i];
        double out_a = b2_;
        for (std::size_t h = 0; h < hidden_units_; ++h) {
            double a = b1_[h];
            for (std::size_t i = 0; i < inputs_; ++i) a += w1_[h * inputs_ + i] * z[i];
            hidden[h] = sigmoid(a);
            out_a += w2_[h] * hidden[h];
        }
        const double o = sigmoid(out_a);
        const double delta_out = scale * (o - static_cast<double>(row.label)) * o * (1.0 - o);
        *gb2 += delta_out;
        for (std::size_t h = 0; h < hidden_units_; ++h) {
            gw2[h] += delta_out * hidden[h];
            const double delta_h = delta_out * w2_[h] * hidden[h] * (1.0 - hidden[h]);
            gb1[h] += delta_h;
            for (std::size_t i = 0; i < inputs_; ++i) gw1[h * inputs_ + i] += delta_h * z[i];
        }
    }
    return g;
}

MlpFuser train_mlp(std::span<const FusionInput> dataset, const MlpOptions& options) {
    if (dataset.empty()) throw InputError("train_mlp: dataset is empty");
    if (options.hidden_units < 1) throw ConfigError("train_mlp: hidden_units must be >= 1");

    const std::size_t dim = dataset.front().features.size();
    if (dim < 2) throw InputError("train_mlp: feature rows must hold at least one user feature");
    for (const auto& row : dataset)
        if (row.features.size() != dim)
            throw InputError("train_mlp: inconsistent feature dimensions in dataset");

    const std::size_t inputs = dim - 1;  // trailing bias entry is not a network input

    MlpFuser net;
    net.inputs_ = inputs;
    net.hidden_units_ = options.hidden_units;
    net.seed_ = options.seed;
    net.w1_.resize(options.hidden_units * inputs);
    net.b1_.resize(options.hidden_units);
    net.w2_.resize(options.hidden_units);

    RandomStream rng = RandomStream::derive(options.seed, 0, StreamPurpose::weight_init);
    for (auto& v : net.w1_) v = rng.uniform() - 0.5;
    for (auto& v : net.b1_) v = rng.uniform() - 0.5;
    for (auto& v : net.w2_) v = rng.uniform() - 0.5;
    net.b2_ = rng.uniform() - 0.5;

    const SplitView sv = split_dataset(dataset, options);

    if (options.max_epochs == 0) {
        // Untrained network: initial weights, identity standardization, empty record.
        net.feat_mean_.assign(inputs, 0.0);
        net.feat_scale_.assign(inputs, 1.0);
        net.trained_ = false;
        return net;
    }

    if (sv.train.empty()) throw InputError("train_mlp: training split is empty");
    bool has0 = false, has1 = false;
    for (const auto& row : sv.train) (row.label ? has1 : has0) = true;
    if (!has0 || !has1)
        throw InputError("train_mlp: training split must contain both classes");

    // Standardize inputs with training-split statistics.
    net.feat_mean_.assign(inputs, 0.0);
    net.feat_scale_.assign(inputs, 1.0);
    for (const auto& row : sv.train)
        for (std::size_t i = 0; i < inputs; ++i) net.feat_mean_[i] += row.features[i];
    for (auto& m : net.feat_mean_) m /= static_cast<double>(sv.train.size());
    std::vector<double> var(inputs, 0.0);
    for (const auto& row : sv.train)
        for (std::size_t i = 0; i < inputs; ++i) {
            const double d = row.features[i] - net.feat_mean_[i];
            var[i] += d * d;
        }
    for (std::size_t i = 0; i < inputs; ++i) {
        const double sd = std::sqrt(var[i] / static_cast<double>(sv.train.size()));
        net.feat_scale_[i] = sd > 1e-300 ? 1.0 / sd : 1.0;
    }

    net.trained_ = true;  // forward() usable during training

    TrainingRecord rec;
    double best_val = std::numeric_limits<double>::infinity();
    std::vector<double> best_params = net.parameters();
    std::size_t best_epoch = 0;
    std::size_t epochs_since_best = 0;

    const bool use_early_stop = !sv.validation.empty();
    for (std::size_t epoch = 1; epoch <= options.max_epochs; ++epoch) {
        const std::vector<double> grad = net.loss_gradient(sv.train);
        double gnorm2 = 0.0;
        for (double gi : grad) gnorm2 += gi * gi;

        std::vector<double> params = net.parameters();
        for (std::size_t i = 0; i < params.size(); ++i)
            params[i] -= options.learning_rate * grad[i];
        net.set_parameters(params);

        rec.train_mse.push_back(net.mse(sv.train));
        rec.validation_mse.push_back(net.mse(sv.validation));
        rec.test_mse.push_back(net.mse(sv.test));
        rec.gradient_norm.push_back(std::sqrt(gnorm2));

        const double val = use_early_stop ? rec.validation_mse.back() : rec.train_mse.back();
        if (val < best_val) {
            best_val = val;
            best_params = net.parameters();
            best_epoch = epoch;
            epochs_since_best = 0;
        } else if (use_early_stop && ++epochs_since_best >= options.patience) {
            break;
        }
    }

    net.set_parameters(best_params);
    rec.stop_epoch = best_epoch;
    rec.best_validation_mse = best_val;
    net.record_ = std::move(rec);
    return net;
}

std::string MlpFuser::to_json() const {
    json j;
    j["type"] = "mlp";
    j["inputs"] = inputs_;
    j["hidden_units"] = hidden_units_;
    j["w1"] = w1_;
    j["b1"] = b1_;
    j["w2"] = w2_;
    j["b2"] = b2_;
    j["feature_mean"] = feat_mean_;
    j["feature_scale"] = feat_scale_;
    j["trained"] = trained_;
    j["seed"] = seed_;
    j["stop_epoch"] = record_.stop_epoch;
    j["best_validation_mse"] = record_.best_validation_mse;
    return j.dump(2);
}

MlpFuser MlpFuser::from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.value("type", "") != "mlp")
        throw InputError("MlpFuser::from_json: not an mlp fuser file");
    MlpFuser net;
    net.inputs_ = j.at("inputs").get<std::size_t>();
    net.hidden_units_ = j.at("hidden_units").get<std::size_t>();
    net.w1_ = j.at("w1").get<std::vector<double>>();
    net.b1_ = j.at("b1").get<std::vector<double>>();
    net.w2_ = j.at("w2").get<std::vector<double>>();
    net.b2_ = j.at("b2").get<double>();
    net.feat_mean_ = j.at("feature_mean").get<std::vector<double>>();
    net.feat_scale_ = j.at("feature_scale").get<std::vector<double>>();
    net.trained_ = j.at("trained").get<bool>();
    net.seed_ = j.value("seed", std::uint64_t{0});
    net.record_.stop_epoch = j.value("stop_epoch", std::size_t{0});
    net.record_.best_validation_mse = j.value("best_validation_mse", 0.0);
    if (net.w1_.size() != net.hidden_units_ * net.inputs_ ||
        net.b1_.size() != net.hidden_units_ || net.w2_.size() != net.hidden_units_ ||
        net.feat_mean_.size() != net.inputs_ || net.feat_scale_.size() != net.inputs_)
        throw InputError("MlpFuser::from_json: inconsistent parameter shapes");
    return net;
}

}  // namespace cogsense
