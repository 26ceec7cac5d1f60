#include "evpipe/baseline.hpp"

#include <algorithm>
#include <stdexcept>

#include "evpipe/errors.hpp"
#include "evpipe/metrics.hpp"

namespace evpipe {

// Area pooling with exact fractional coverage. Cell boundaries are
// multiples of width/16 and height/16; working in 1/16-pixel units
// keeps every weight an integer, so the pooled mean is a single exact
// rational and the feature is bit-reproducible.
ClipFeature featurize(const std::vector<Frame>& frames) {
    if (frames.empty()) {
        throw std::invalid_argument("featurize: clip has no frames");
    }
    const SensorGeometry g = frames.front().geometry;
    if (!g.valid()) {
        throw std::invalid_argument("featurize: invalid geometry");
    }
    for (const Frame& f : frames) {
        if (f.geometry != g) {
            throw std::invalid_argument("featurize: frames disagree on geometry");
        }
    }

    // overlap of pixel k (covering [16k, 16k+16)) with cell c (covering
    // [c*len, (c+1)*len)), in 1/16-pixel units
    auto axis_weights = [](int len) {
        std::vector<std::vector<std::pair<int, int64_t>>> cells(kFeatureSide);
        for (int c = 0; c < kFeatureSide; ++c) {
            const int64_t lo = static_cast<int64_t>(c) * len;
            const int64_t hi = static_cast<int64_t>(c + 1) * len;
            for (int k = lo / 16; static_cast<int64_t>(k) * 16 < hi && k < len; ++k) {
                int64_t o = std::min<int64_t>(hi, 16LL * k + 16) - std::max<int64_t>(lo, 16LL * k);
                if (o > 0) cells[c].push_back({k, o});
            }
        }
        return cells;
    };
    const auto cols = axis_weights(g.width);
    const auto rows = axis_weights(g.height);

    // Sum pixel values over all frames first (integer, exact), then pool.
    std::vector<int64_t> sum(g.pixel_count(), 0);
    for (const Frame& f : frames) {
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += f.pixels[i];
    }

    ClipFeature feature;
    const double denom = static_cast<double>(frames.size()) * g.width * g.height * 255.0;
    for (int cy = 0; cy < kFeatureSide; ++cy) {
        for (int cx = 0; cx < kFeatureSide; ++cx) {
            int64_t acc = 0;
            for (const auto& [y, wy] : rows[cy]) {
                for (const auto& [x, wx] : cols[cx]) {
                    acc += sum[static_cast<std::size_t>(y) * g.width + x] * wx * wy;
                }
            }
            double v = static_cast<double>(acc) / denom;
            feature.values[static_cast<std::size_t>(cy) * kFeatureSide + cx] =
                std::clamp(v, 0.0, 1.0);
        }
    }
    return feature;
}

CentroidModel fit(const std::vector<std::pair<ClipFeature, int>>& samples) {
    if (samples.empty()) {
        throw std::invalid_argument("fit: no samples");
    }
    std::map<int, std::pair<std::array<double, kFeatureDim>, int64_t>> acc;
    for (const auto& [feature, label] : samples) {
        if (label < 0 || label >= kNumClasses) {
            throw std::invalid_argument("fit: label out of range");
        }
        auto& [vec, n] = acc[label];
        for (int i = 0; i < kFeatureDim; ++i) vec[i] += feature.values[i];
        ++n;
    }
    CentroidModel model;
    for (auto& [label, entry] : acc) {
        auto& [vec, n] = entry;
        for (double& v : vec) v /= static_cast<double>(n);
        model.centroids[label] = vec;
    }
    return model;
}

int predict(const CentroidModel& model, const ClipFeature& feature) {
    if (!model.fitted()) {
        throw std::invalid_argument("predict: model has no centroids");
    }
    int best = -1;
    double best_d2 = 0.0;
    for (const auto& [label, centroid] : model.centroids) { // ids ascend; ties keep lowest
        double d2 = 0.0;
        for (int i = 0; i < kFeatureDim; ++i) {
            double d = feature.values[i] - centroid[i];
            d2 += d * d;
        }
        if (best < 0 || d2 < best_d2) {
            best = label;
            best_d2 = d2;
        }
    }
    return best;
}

nlohmann::json model_to_json(const CentroidModel& model) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [label, centroid] : model.centroids) {
        j[std::to_string(label)] = centroid;
    }
    return j;
}

CentroidModel model_from_json(const nlohmann::json& j) {
    CentroidModel model;
    if (!j.is_object()) throw ParseError("model: expected JSON object");
    for (const auto& [key, value] : j.items()) {
        int label = -1;
        try {
            label = std::stoi(key);
        } catch (...) {
            throw ParseError("model: bad class id '" + key + "'");
        }
        if (label < 0 || label >= kNumClasses) {
            throw ParseError("model: class id out of range '" + key + "'");
        }
        if (!value.is_array() || value.size() != kFeatureDim) {
            throw ParseError("model: centroid for '" + key + "' must have 256 entries");
        }
        std::array<double, kFeatureDim> centroid{};
        for (int i = 0; i < kFeatureDim; ++i) centroid[i] = value[i].get<double>();
        model.centroids[label] = centroid;
    }
    return model;
}

} // namespace evpipe
