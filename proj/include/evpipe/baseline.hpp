#pragma once

#include <array>
#include <map>
#include <vector>

#include <json.hpp>

#include "evpipe/dataset.hpp"

namespace evpipe {

inline constexpr int kFeatureSide = 16;
inline constexpr int kFeatureDim = kFeatureSide * kFeatureSide;

// Temporal-mean frame, area-averaged down to 16x16, scaled to [0,1].
struct ClipFeature {
    std::array<double, kFeatureDim> values{};
};

ClipFeature featurize(const std::vector<Frame>& frames);
inline ClipFeature featurize(const ClipSample& clip) { return featurize(clip.frames); }

// Nearest-centroid model: per-class mean feature vectors.
struct CentroidModel {
    std::map<int, std::array<double, kFeatureDim>> centroids;

    bool fitted() const { return !centroids.empty(); }
};

CentroidModel fit(const std::vector<std::pair<ClipFeature, int>>& samples);

// Argmin Euclidean distance; ties break toward the lowest class id.
int predict(const CentroidModel& model, const ClipFeature& feature);

// {"<class id>": [256 doubles], ...}
nlohmann::json model_to_json(const CentroidModel& model);
CentroidModel model_from_json(const nlohmann::json& j);

} // namespace evpipe
