#include "evpipe/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <stdexcept>

#include "evpipe/errors.hpp"
#include "evpipe/ingest.hpp"

namespace evpipe {

ConfusionMatrix confusion_from_pairs(const std::vector<std::pair<int, int>>& pairs) {
    ConfusionMatrix cm;
    for (const auto& [truth, predicted] : pairs) {
        if (truth < 0 || truth >= kNumClasses || predicted < 0 || predicted >= kNumClasses) {
            throw std::invalid_argument("label out of range [0, 12)");
        }
        ++cm.counts[truth][predicted];
    }
    return cm;
}

MetricsReport compute_metrics(const ConfusionMatrix& cm) {
    const int64_t total = cm.total();
    if (total < 1) {
        throw std::invalid_argument("empty confusion matrix");
    }

    MetricsReport report;
    int64_t trace = 0;
    double sum_p = 0.0, sum_r = 0.0, sum_f1 = 0.0;
    for (int c = 0; c < kNumClasses; ++c) {
        ClassMetrics& m = report.per_class[c];
        m.tp = cm.counts[c][c];
        int64_t row = 0, col = 0;
        for (int k = 0; k < kNumClasses; ++k) {
            row += cm.counts[c][k];
            col += cm.counts[k][c];
        }
        m.fn = row - m.tp;
        m.fp = col - m.tp;
        m.tn = total - m.tp - m.fp - m.fn;
        m.precision = m.tp + m.fp == 0 ? 0.0
                                       : static_cast<double>(m.tp) /
                                             static_cast<double>(m.tp + m.fp);
        m.recall = m.tp + m.fn == 0 ? 0.0
                                    : static_cast<double>(m.tp) /
                                          static_cast<double>(m.tp + m.fn);
        m.f1 = m.precision + m.recall == 0.0
                   ? 0.0
                   : 2.0 * m.recall * m.precision / (m.recall + m.precision);
        trace += m.tp;
        sum_p += m.precision;
        sum_r += m.recall;
        sum_f1 += m.f1;
    }
    report.accuracy = static_cast<double>(trace) / static_cast<double>(total);
    report.precision = sum_p / kNumClasses;
    report.recall = sum_r / kNumClasses;
    report.f1 = sum_f1 / kNumClasses;
    return report;
}

std::string render_report(const std::map<std::string, MetricsReport>& reports) {
    std::size_t width = 5; // "Model"
    for (const auto& [name, report] : reports) {
        width = std::max(width, name.size());
    }

    std::vector<const std::pair<const std::string, MetricsReport>*> rows;
    for (const auto& item : reports) rows.push_back(&item);
    std::sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
        if (a->second.accuracy != b->second.accuracy) {
            return a->second.accuracy > b->second.accuracy;
        }
        return a->first < b->first;
    });

    auto pad = [width](const std::string& s) {
        std::string out = s;
        out.resize(width, ' ');
        return out;
    };

    std::string out = pad("Model") + " Precision Recall F1 ACC\n";
    char buf[64];
    for (const auto* row : rows) {
        const MetricsReport& r = row->second;
        std::snprintf(buf, sizeof buf, " %.3f %.3f %.3f %.3f\n", r.precision, r.recall,
                      r.f1, r.accuracy);
        out += pad(row->first) + buf;
    }
    return out;
}

nlohmann::json report_to_json(const MetricsReport& report) {
    nlohmann::json per_class = nlohmann::json::object();
    for (int c = 0; c < kNumClasses; ++c) {
        const ClassMetrics& m = report.per_class[c];
        per_class[class_by_id(c).name] = {
            {"tp", m.tp},           {"fp", m.fp},         {"fn", m.fn},
            {"tn", m.tn},           {"precision", m.precision},
            {"recall", m.recall},   {"f1", m.f1},
        };
    }
    return nlohmann::json{
        {"accuracy", report.accuracy}, {"precision", report.precision},
        {"recall", report.recall},     {"f1", report.f1},
        {"per_class", per_class},
    };
}

std::vector<std::pair<int, int>> parse_prediction_lines(std::string_view bytes) {
    std::vector<std::pair<int, int>> pairs;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < bytes.size()) {
        std::size_t eol = bytes.find('\n', pos);
        std::string_view line = bytes.substr(pos, eol == std::string_view::npos
                                                      ? std::string_view::npos
                                                      : eol - pos);
        pos = eol == std::string_view::npos ? bytes.size() : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        int values[2];
        int nval = 0;
        std::size_t i = 0;
        bool bad = false;
        while (i < line.size() && !bad) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            if (i >= line.size()) break;
            std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
            std::string_view tok = line.substr(start, i - start);
            int v = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || ptr != tok.data() + tok.size() || nval == 2) {
                bad = true;
            } else {
                values[nval++] = v;
            }
        }
        if (nval == 0 && !bad) continue; // blank line
        if (bad || nval != 2) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected 'true predicted' integer pair");
        }
        for (int v : values) {
            if (v < 0 || v >= kNumClasses) {
                throw ParseError("line " + std::to_string(line_no) +
                                 ": label out of range [0, 12)");
            }
        }
        pairs.emplace_back(values[0], values[1]);
    }
    return pairs;
}

} // namespace evpipe
