#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace evpipe {

inline constexpr int kNumClasses = 12;

// rows = true class, columns = predicted class.
struct ConfusionMatrix {
    std::array<std::array<int64_t, kNumClasses>, kNumClasses> counts{};

    int64_t total() const {
        int64_t t = 0;
        for (const auto& row : counts)
            for (int64_t c : row) t += c;
        return t;
    }
    int64_t& at(int true_label, int predicted) { return counts[true_label][predicted]; }
    int64_t at(int true_label, int predicted) const { return counts[true_label][predicted]; }
};

// One-vs-rest counts and metrics for a single class. Ratios with a zero
// denominator are defined as 0 so reports stay total.
struct ClassMetrics {
    int64_t tp = 0;
    int64_t fp = 0;
    int64_t fn = 0;
    int64_t tn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct MetricsReport {
    double accuracy = 0.0;
    double precision = 0.0; // macro average over all 12 classes
    double recall = 0.0;
    double f1 = 0.0;
    std::array<ClassMetrics, kNumClasses> per_class{};
};

// Labels must be in [0, 12); out-of-range is a caller bug.
ConfusionMatrix confusion_from_pairs(const std::vector<std::pair<int, int>>& pairs);

// Accuracy = trace/total; precision, recall, F1 are unweighted means of
// the per-class one-vs-rest values, absent classes counting as 0.
// Throws std::invalid_argument on an all-zero matrix.
MetricsReport compute_metrics(const ConfusionMatrix& cm);

// Fixed-width table in the report shape: model name column, then
// precision, recall, F1 and accuracy to 3 decimals, rows sorted by
// accuracy descending (ties by name).
std::string render_report(const std::map<std::string, MetricsReport>& reports);

nlohmann::json report_to_json(const MetricsReport& report);

// Prediction files: one "true predicted" integer pair per line, blank
// lines ignored. Data errors carry 1-based line numbers.
std::vector<std::pair<int, int>> parse_prediction_lines(std::string_view bytes);

} // namespace evpipe
