#include "evpipe/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "evpipe/errors.hpp"
#include "evpipe/parallel.hpp"
#include "evpipe/pgm.hpp"

namespace evpipe {

namespace {

std::string sanitize_stem(const std::filesystem::path& p) {
    std::string stem = p.stem().string();
    if (stem.empty()) stem = "recording";
    for (char& c : stem) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
        if (!ok) c = '_';
    }
    return stem;
}

std::string clip_dir_name(std::size_t entry_index, const std::string& stem,
                          std::size_t window_index, std::size_t augment_index,
                          const std::string& augment_tag) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "r%04zu_", entry_index);
    std::string name = buf + stem;
    std::snprintf(buf, sizeof buf, "_w%03zu", window_index);
    name += buf;
    if (!augment_tag.empty()) {
        std::snprintf(buf, sizeof buf, "_a%zu_", augment_index);
        name += buf + augment_tag;
    }
    return name;
}

void validate_build_config(const BuildConfig& config) {
    if (!config.geometry.valid()) {
        throw std::invalid_argument("build: geometry must be at least 1x1");
    }
    const SamplerConfig& s = config.sampler;
    if (s.window_seconds < 1) {
        throw std::invalid_argument("build: window_seconds must be >= 1");
    }
    if (s.clip_len < 1 || int64_t(s.clip_len) > int64_t(s.fps) * s.window_seconds) {
        throw std::invalid_argument("build: clip_len must be in [1, fps*window_seconds]");
    }
    frame_interval_us(s.fps); // validates fps range
    if (config.encoder.fps != s.fps) {
        throw std::invalid_argument("build: encoder fps and sampler fps must agree");
    }
}

struct EntryResult {
    std::vector<std::pair<Split, int64_t>> emitted; // split -> clips written (per class of entry)
};

} // namespace

std::vector<int> sample_clip_indices(int n, int clip_len, Rng& rng) {
    if (clip_len < 0 || n < clip_len) {
        throw std::invalid_argument("sample_clip: need n >= clip_len >= 0");
    }
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < clip_len; ++i) {
        const auto j = static_cast<std::size_t>(i) +
                       rng.bounded(static_cast<uint64_t>(n - i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(clip_len));
    std::sort(pool.begin(), pool.end());
    return pool;
}

std::vector<TimeWindow> slide_windows(const EventStream& recording,
                                      const SamplerConfig& config) {
    std::vector<TimeWindow> windows;
    if (recording.events.empty()) return windows;
    const int64_t window_len = config.window_us();
    const int64_t stride = config.effective_stride_us();
    const int64_t first = recording.events.front().t;
    const int64_t end = recording.events.back().t + 1;
    for (int64_t start = first; start + window_len <= end; start += stride) {
        windows.push_back({start, start + window_len});
    }
    return windows;
}

int64_t BuildSummary::split_total(const std::string& split) const {
    auto it = counts.find(split);
    if (it == counts.end()) return 0;
    int64_t t = 0;
    for (const auto& [cls, n] : it->second) t += n;
    return t;
}

nlohmann::json BuildSummary::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const char* split : {"train", "validation", "test"}) {
        nlohmann::json block = nlohmann::json::object();
        auto it = counts.find(split);
        if (it != counts.end()) {
            for (const auto& [cls, n] : it->second) block[cls] = n;
        }
        j[split] = block;
    }
    return j;
}

std::string BuildSummary::to_text() const {
    std::string out;
    for (const char* split : {"train", "validation", "test"}) {
        auto it = counts.find(split);
        if (it != counts.end()) {
            for (const auto& [cls, n] : it->second) {
                out += std::string(split) + " " + cls + " " + std::to_string(n) + "\n";
            }
        }
        out += std::string(split) + " total " + std::to_string(split_total(split)) + "\n";
    }
    return out;
}

void write_clip_archive(const std::filesystem::path& dir, const ClipSample& clip) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < clip.frames.size(); ++i) {
        write_pgm_file(dir / frame_file_name(i), clip.frames[i]);
    }
    nlohmann::json j{
        {"class", clip.label.name},
        {"label_id", clip.label.id},
        {"split", to_string(clip.split)},
        {"source",
         {{"path", clip.source.path},
          {"t_start_us", clip.source.window.t_start},
          {"t_end_us", clip.source.window.t_end}}},
        {"indices", clip.indices},
        {"encoder", {{"kind", to_string(clip.encoder)}, {"fps", clip.fps}}},
        {"geometry",
         {{"width", clip.frames.empty() ? 0 : clip.frames.front().geometry.width},
          {"height", clip.frames.empty() ? 0 : clip.frames.front().geometry.height}}},
        {"augment", clip.augment_tag},
    };
    std::string text = j.dump(2) + "\n";
    write_file_bytes(dir / "clip.json",
                     std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(text.data()),
                                              text.size()));
}

ClipSample read_clip_archive(const std::filesystem::path& dir) {
    std::vector<uint8_t> bytes = read_file_bytes(dir / "clip.json");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError((dir / "clip.json").string() + ": " + e.what());
    }
    ClipSample clip;
    try {
        clip.label = class_by_id(j.at("label_id").get<int>());
        auto split = parse_split(j.at("split").get<std::string>());
        if (!split) throw ParseError("bad split");
        clip.split = *split;
        clip.source.path = j.at("source").at("path").get<std::string>();
        clip.source.window.t_start = j.at("source").at("t_start_us").get<int64_t>();
        clip.source.window.t_end = j.at("source").at("t_end_us").get<int64_t>();
        clip.indices = j.at("indices").get<std::vector<int>>();
        auto kind = parse_encoder_kind(j.at("encoder").at("kind").get<std::string>());
        if (!kind) throw ParseError("bad encoder kind");
        clip.encoder = *kind;
        clip.fps = j.at("encoder").at("fps").get<int>();
        clip.augment_tag = j.at("augment").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError((dir / "clip.json").string() + ": " + e.what());
    }
    clip.frames.reserve(clip.indices.size());
    for (std::size_t i = 0; i < clip.indices.size(); ++i) {
        clip.frames.push_back(read_pgm_file(dir / frame_file_name(i)));
    }
    return clip;
}

BuildSummary build_splits(const std::vector<ManifestEntry>& entries,
                          const BuildConfig& config) {
    validate_build_config(config);
    std::filesystem::create_directories(config.output_dir);

    std::vector<EntryResult> results(entries.size());
    parallel_for(entries.size(), [&](std::size_t idx) {
        const ManifestEntry& entry = entries[idx];
        std::filesystem::path rec_path = entry.path;
        if (rec_path.is_relative()) rec_path = config.manifest_dir / rec_path;

        EventStream stream = read_events_file(rec_path, config.geometry);
        const std::vector<TimeWindow> windows = slide_windows(stream, config.sampler);

        // Keyed on the manifest path string so output does not depend on
        // where the tree is mounted.
        Rng rng(derive_stream_seed(config.sampler.seed, entry.path));
        const std::string stem = sanitize_stem(entry.path);
        const bool augmented = entry.split != Split::Test;

        EncodingParams enc = config.encoder;
        enc.geometry = config.geometry;

        int64_t emitted = 0;
        for (std::size_t w = 0; w < windows.size(); ++w) {
            std::vector<Frame> frames = encode_sequence(stream, enc, windows[w]);
            if (frames.size() < static_cast<std::size_t>(config.sampler.clip_len)) {
                continue; // window shorter than a clip; cannot happen with whole windows
            }
            std::vector<int> indices = sample_clip_indices(
                static_cast<int>(frames.size()), config.sampler.clip_len, rng);

            ClipSample clip;
            clip.label = entry.label;
            clip.split = entry.split;
            clip.source = {entry.path, windows[w]};
            clip.indices = indices;
            clip.encoder = enc.kind;
            clip.fps = enc.fps;
            clip.frames.reserve(indices.size());
            for (int i : indices) clip.frames.push_back(frames[static_cast<std::size_t>(i)]);

            const std::filesystem::path split_dir =
                config.output_dir / to_string(entry.split) / entry.label.name;
            write_clip_archive(split_dir / clip_dir_name(idx, stem, w, 0, ""), clip);
            ++emitted;

            if (augmented) {
                for (std::size_t a = 0; a < config.augments.size(); ++a) {
                    ClipSample aug = clip;
                    aug.augment_tag = config.augments[a].tag();
                    for (Frame& f : aug.frames) {
                        f = apply_augment(f, config.augments[a]);
                    }
                    write_clip_archive(
                        split_dir / clip_dir_name(idx, stem, w, a, aug.augment_tag), aug);
                    ++emitted;
                }
            }
        }
        results[idx].emitted.push_back({entry.split, emitted});
    });

    BuildSummary summary;
    for (const char* split : {"train", "validation", "test"}) {
        summary.counts[split]; // all three splits always present
    }
    for (std::size_t idx = 0; idx < entries.size(); ++idx) {
        for (const auto& [split, n] : results[idx].emitted) {
            summary.counts[to_string(split)][entries[idx].label.name] += n;
        }
    }
    for (const char* split : {"train", "validation", "test"}) {
        if (summary.split_total(split) == 0) {
            summary.warnings.push_back(std::string("split '") + split + "' is empty");
        }
    }

    std::string text = summary.to_json().dump(2) + "\n";
    write_file_bytes(config.output_dir / "summary.json",
                     std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(text.data()),
                                              text.size()));
    return summary;
}

} // namespace evpipe
