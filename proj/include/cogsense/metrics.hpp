#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cogsense {

// ROC curve with points sorted by p_fa ascending; endpoints (0,0) and (1,1)
// are always present. thresholds[i] is the score cut producing points[i]
// (decision = score > threshold).
struct RocCurve {
    struct Point {
        double p_fa;
        double p_d;
    };
    std::vector<Point> points;
    std::vector<double> thresholds;
};

struct ConfusionMatrix {
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t false_negative = 0;
    std::size_t true_negative = 0;

    std::size_t total() const {
        return true_positive + false_positive + false_negative + true_negative;
    }
    double accuracy() const;
    // Share of all evaluated samples, in percent.
    double percent_of_total(std::size_t count) const;
};

struct ErrorHistogram {
    std::vector<double> bin_edges;   // n_bins + 1, strictly increasing
    std::vector<std::size_t> counts; // n_bins, sums to the sample count
};

// Exact threshold sweep over the distinct score values. Requires both classes
// present. p_fa = FP/negatives, p_d = TP/positives at each cut.
RocCurve roc_from_scores(std::span<const double> scores, std::span<const int> labels);

// Trapezoidal area under the curve; equals the pairwise-ordering probability
// for tie-free scores.
double auc(const RocCurve& curve);

ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> labels);

// Uniform-width bins spanning [min, max] of the error values (a degenerate
// span widens to +-0.5 around the single value). Last bin includes its upper
// edge.
ErrorHistogram error_histogram(std::span<const double> errors, std::size_t n_bins);

}  // namespace cogsense
