#pragma once

#include <filesystem>
#include <vector>

#include "evpipe/augment.hpp"
#include "evpipe/dataset.hpp"
#include "evpipe/encoders.hpp"

namespace evpipe {

// Run configuration, loaded from a JSON file mirroring these fields.
// One seed governs all randomness in a run.
struct RunConfig {
    std::filesystem::path manifest;    // resolved against the config file's directory
    SensorGeometry geometry;
    EncodingParams encoder;
    SamplerConfig sampler;
    std::vector<AugmentSpec> augments;
    std::filesystem::path output_dir;  // resolved against the config file's directory

    BuildConfig to_build_config() const;
};

// Throws std::invalid_argument listing every offending field; the CLI
// maps that to exit code 2.
RunConfig load_run_config(const std::filesystem::path& path);

} // namespace evpipe
