#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cogsense/rng.hpp"

namespace cogsense {

// One fusion-center observation: per-user features (recovered bits or
// equalized soft values) with a trailing constant 1 as the bias input,
// plus the ground-truth hypothesis label.
struct FusionInput {
    std::vector<double> features;  // length M+1, last entry exactly 1
    int label = 0;
    std::size_t time_index = 0;

    static FusionInput from_user_features(std::span<const double> user_features, int label,
                                          std::size_t time_index = 0);
};

// ---- Hard combining rules -------------------------------------------------

// 1 iff at least k of the M bits are 1.
int fuse_k_of_m(std::span<const int> bits, std::size_t k);
int fuse_and(std::span<const int> bits);       // k = M
int fuse_or(std::span<const int> bits);        // k = 1
int fuse_majority(std::span<const int> bits);  // k = ceil((M+1)/2), even-M ties -> 0

// Strict-majority k for M users: ceil((M+1)/2).
std::size_t majority_k(std::size_t m_users);

// ---- Adaptive linear combiner (NLMS adaline) --------------------------------

class AdaptiveFuser {
public:
    // dimension = M+1 (per-user features plus bias input). Weights start at zero.
    AdaptiveFuser(std::size_t dimension, double step_size, double threshold = 0.5);

    // One normalized-LMS update:
    //   e = d - W.Y ;  W <- W + step * e * Y / (|Y|^2 + eps)
    // Returns the pre-update linear error e.
    double nlms_step(const FusionInput& input);

    // Linear response r = W.Y and the thresholded decision r > threshold.
    std::pair<double, int> predict(std::span<const double> features) const;

    const std::vector<double>& weights() const { return weights_; }
    std::vector<double>& mutable_weights() { return weights_; }
    double step_size() const { return step_size_; }
    double threshold() const { return threshold_; }
    std::size_t update_count() const { return update_count_; }

    std::string to_json() const;
    static AdaptiveFuser from_json(const std::string& text);

private:
    std::vector<double> weights_;
    double step_size_;
    double threshold_;
    std::size_t update_count_ = 0;
};

// Denominator guard in the NLMS update.
inline constexpr double kNlmsEpsilon = 1e-12;

// ---- Multilayer perceptron fuser --------------------------------------------

struct TrainingRecord {
    std::vector<double> train_mse;
    std::vector<double> validation_mse;
    std::vector<double> test_mse;
    std::vector<double> gradient_norm;
    std::size_t stop_epoch = 0;       // epoch whose weights were kept
    double best_validation_mse = 0.0;
};

struct MlpOptions {
    std::size_t hidden_units = 10;
    double learning_rate = 1.0;
    std::size_t max_epochs = 1000;
    std::size_t patience = 6;
    double train_fraction = 0.70;
    double validation_fraction = 0.15;
    double test_fraction = 0.15;
    std::uint64_t seed = 1;
};

// One-hidden-layer sigmoid network trained by full-batch gradient descent on
// mean squared error, with early stopping on the validation split. Inputs are
// standardized with statistics estimated on the training split.
class MlpFuser {
public:
    MlpFuser() = default;

    // score in (0,1) plus the thresholded decision score > threshold.
    std::pair<double, int> predict(std::span<const double> user_features,
                                   double threshold = 0.5) const;

    bool trained() const { return trained_; }
    std::size_t hidden_units() const { return hidden_units_; }
    const TrainingRecord& record() const { return record_; }

    std::string to_json() const;
    static MlpFuser from_json(const std::string& text);

    // Mean squared error and (analytic) loss gradient on a dataset; exposed so
    // the gradient can be checked against finite differences.
    double mse(std::span<const FusionInput> data) const;
    std::vector<double> loss_gradient(std::span<const FusionInput> data) const;
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> flat);

    friend MlpFuser train_mlp(std::span<const FusionInput> dataset, const MlpOptions& options);

private:
    double forward(std::span<const double> user_features) const;

    std::size_t inputs_ = 0;
    std::size_t hidden_units_ = 0;
    std::vector<double> w1_;  // hidden x inputs, row-major
    std::vector<double> b1_;  // hidden
    std::vector<double> w2_;  // hidden
    double b2_ = 0.0;
    std::vector<double> feat_mean_;   // standardization, fit on training split
    std::vector<double> feat_scale_;
    bool trained_ = false;
    std::uint64_t seed_ = 0;
    TrainingRecord record_;
};

// Train on FusionInput rows (bias entry is ignored; the network has its own
// bias parameters). Splits the dataset sequentially into train/validation/test
// per the option fractions. max_epochs = 0 returns an untrained network.
MlpFuser train_mlp(std::span<const FusionInput> dataset, const MlpOptions& options);

}  // namespace cogsense
