#include "cogsense/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cogsense/errors.hpp"

namespace cogsense {

double ConfusionMatrix::accuracy() const {
    const std::size_t n = total();
    if (n == 0) return 0.0;
    return static_cast<double>(true_positive + true_negative) / static_cast<double>(n);
}

double ConfusionMatrix::percent_of_total(std::size_t count) const {
    const std::size_t n = total();
    if (n == 0) return 0.0;
    return 100.0 * static_cast<double>(count) / static_cast<double>(n);
}

RocCurve roc_from_scores(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size())
        throw InputError("roc_from_scores: scores and labels differ in length");
    if (scores.empty()) throw InputError("roc_from_scores: empty input");

    std::size_t positives = 0;
    for (int l : labels) positives += (l != 0);
    const std::size_t negatives = scores.size() - positives;
    if (positives == 0 || negatives == 0)
        throw InputError("roc_from_scores: both classes must be present");

    // Sort by score descending; sweep the cut below each distinct score.
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0});
    curve.thresholds.push_back(std::numeric_limits<double>::infinity());

    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (labels[order[i]] != 0)
            ++tp;
        else
            ++fp;
        // Emit one point per distinct score (after its tie group).
        if (i + 1 < order.size() && scores[order[i + 1]] == scores[order[i]]) continue;
        const double pfa = static_cast<double>(fp) / static_cast<double>(negatives);
        const double pd = static_cast<double>(tp) / static_cast<double>(positives);
        // Cutting exactly at this score group realizes (pfa, pd) under the
        // strict decision rule score > threshold.
        curve.points.push_back({pfa, pd});
        curve.thresholds.push_back(scores[order[i]]);
    }

    curve.points.push_back({1.0, 1.0});
    curve.thresholds.push_back(-std::numeric_limits<double>::infinity());
    return curve;
}

double auc(const RocCurve& curve) {
    if (curve.points.size() < 2) throw InputError("auc: curve needs at least two points");
    double area = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& a = curve.points[i - 1];
        const auto& b = curve.points[i];
        area += (b.p_fa - a.p_fa) * (a.p_d + b.p_d) * 0.5;
    }
    return area;
}

ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size())
        throw InputError("confusion: predictions and labels differ in length");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool p = predictions[i] != 0;
        const bool l = labels[i] != 0;
        if (p && l)
            ++cm.true_positive;
        else if (p && !l)
            ++cm.false_positive;
        else if (!p && l)
            ++cm.false_negative;
        else
            ++cm.true_negative;
    }
    return cm;
}

ErrorHistogram error_histogram(std::span<const double> errors, std::size_t n_bins) {
    if (errors.empty()) throw InputError("error_histogram: empty input");
    if (n_bins < 1) throw ConfigError("error_histogram: n_bins must be >= 1");

    auto [lo_it, hi_it] = std::minmax_element(errors.begin(), errors.end());
    double lo = *lo_it, hi = *hi_it;
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }

    ErrorHistogram h;
    h.bin_edges.resize(n_bins + 1);
    for (std::size_t i = 0; i <= n_bins; ++i)
        h.bin_edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_bins);
    h.bin_edges.front() = lo;
    h.bin_edges.back() = hi;

    h.counts.assign(n_bins, 0);
    const double width = (hi - lo) / static_cast<double>(n_bins);
    for (double e : errors) {
        std::size_t idx = static_cast<std::size_t>((e - lo) / width);
        if (idx >= n_bins) idx = n_bins - 1;  // max value lands in the last bin
        ++h.counts[idx];
    }
    return h;
}

}  // namespace cogsense
