#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "evpipe/augment.hpp"
#include "evpipe/encoders.hpp"
#include "evpipe/events.hpp"
#include "evpipe/ingest.hpp"
#include "evpipe/rng.hpp"

namespace evpipe {

struct SamplerConfig {
    int fps = 25;
    int window_seconds = 3;
    int clip_len = 16;
    uint64_t seed = 0;
    int64_t stride_us = 0; // 0 = window length (non-overlapping)

    int64_t window_us() const { return int64_t(window_seconds) * 1'000'000; }
    int64_t effective_stride_us() const { return stride_us > 0 ? stride_us : window_us(); }
};

struct ClipSource {
    std::string path;
    TimeWindow window;
};

// One classification sample: clip_len frames in strictly increasing
// source-index order, plus provenance.
struct ClipSample {
    std::vector<Frame> frames;
    ClassLabel label;
    ClipSource source;
    Split split = Split::Train;
    std::vector<int> indices;
    EncoderKind encoder = EncoderKind::Frequency;
    int fps = 25;
    std::string augment_tag; // empty for the original clip
};

// clip_len strictly increasing indices drawn uniformly from all
// size-clip_len subsets of {0..n-1}: partial Fisher-Yates selection
// without replacement, then sorted. Fully determined by the rng state.
std::vector<int> sample_clip_indices(int n, int clip_len, Rng& rng);

// Consecutive windows covering the recording, anchored at the first
// event's timestamp, advancing by the configured stride; the final
// partial window is dropped. A short or empty recording yields none.
std::vector<TimeWindow> slide_windows(const EventStream& recording,
                                      const SamplerConfig& config);

struct BuildConfig {
    std::filesystem::path manifest_dir; // base for relative recording paths
    SensorGeometry geometry;
    EncodingParams encoder;
    SamplerConfig sampler;
    std::vector<AugmentSpec> augments;
    std::filesystem::path output_dir;
};

struct BuildSummary {
    // split name -> class name -> clip count
    std::map<std::string, std::map<std::string, int64_t>> counts;
    std::vector<std::string> warnings;

    int64_t split_total(const std::string& split) const;
    nlohmann::json to_json() const;
    std::string to_text() const; // sorted "split class count" lines plus totals
};

// The pipeline core: for each manifest entry, window the recording,
// encode each window, sample a clip, and write a clip archive; train
// and validation clips are additionally expanded once per augment spec,
// test clips never are. Recordings are processed concurrently; output
// depends only on (inputs, seed).
BuildSummary build_splits(const std::vector<ManifestEntry>& entries,
                          const BuildConfig& config);

// Clip archive: directory with clip_len PGM frames plus clip.json.
void write_clip_archive(const std::filesystem::path& dir, const ClipSample& clip);
ClipSample read_clip_archive(const std::filesystem::path& dir);

} // namespace evpipe
