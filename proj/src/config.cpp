#include "evpipe/config.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "evpipe/errors.hpp"
#include "evpipe/ingest.hpp"

namespace evpipe {

namespace {

struct FieldErrors {
    std::vector<std::string> items;

    void add(const std::string& field, const std::string& what) {
        items.push_back(field + ": " + what);
    }
    [[noreturn]] void raise() const {
        std::string msg = "config:";
        for (const auto& item : items) msg += " " + item + ";";
        msg.pop_back();
        throw std::invalid_argument(msg);
    }
};

AugmentSpec parse_augment_spec(const nlohmann::json& item, const std::string& field,
                               FieldErrors& errors) {
    AugmentSpec spec;
    if (!item.is_object() || !item.contains("op") || !item["op"].is_string()) {
        errors.add(field, "expected an object with a string 'op'");
        return spec;
    }
    auto op = parse_augment_op(item["op"].get<std::string>());
    if (!op) {
        errors.add(field + ".op", "unknown op '" + item["op"].get<std::string>() + "'");
        return spec;
    }
    spec.op = *op;
    switch (spec.op) {
    case AugmentOp::Gamma:
        if (item.contains("gamma")) {
            if (item["gamma"].is_number()) {
                spec.gamma = item["gamma"].get<double>();
            } else {
                errors.add(field + ".gamma", "must be a number");
            }
        }
        if (!(spec.gamma > 0.0)) errors.add(field + ".gamma", "must be > 0");
        break;
    case AugmentOp::GaussianBlur:
        if (item.contains("sigma")) {
            if (item["sigma"].is_number()) {
                spec.sigma = item["sigma"].get<double>();
            } else {
                errors.add(field + ".sigma", "must be a number");
            }
        }
        if (!(spec.sigma > 0.0)) errors.add(field + ".sigma", "must be > 0");
        break;
    case AugmentOp::Clahe:
        if (item.contains("clip_limit")) {
            const auto& cl = item["clip_limit"];
            if (cl.is_string() && cl.get<std::string>() == "inf") {
                spec.clip_limit = std::numeric_limits<double>::infinity();
            } else if (cl.is_number()) {
                spec.clip_limit = cl.get<double>();
            } else {
                errors.add(field + ".clip_limit", "expected a number or \"inf\"");
            }
        }
        if (!(spec.clip_limit >= 1.0)) errors.add(field + ".clip_limit", "must be >= 1.0");
        if (item.contains("tile_grid")) {
            const auto& tg = item["tile_grid"];
            if (tg.is_array() && tg.size() == 2 && tg[0].is_number_integer() &&
                tg[1].is_number_integer()) {
                spec.tile_grid.cols = tg[0].get<int>();
                spec.tile_grid.rows = tg[1].get<int>();
            } else {
                errors.add(field + ".tile_grid", "expected [cols, rows]");
            }
        }
        if (spec.tile_grid.cols < 1 || spec.tile_grid.rows < 1) {
            errors.add(field + ".tile_grid", "must be at least 1x1");
        }
        break;
    case AugmentOp::Morphology:
        if (item.contains("morph") && item["morph"].is_string()) {
            auto morph = parse_morph_op(item["morph"].get<std::string>());
            if (morph) {
                spec.morph = *morph;
            } else {
                errors.add(field + ".morph",
                           "unknown op '" + item["morph"].get<std::string>() + "'");
            }
        } else {
            errors.add(field + ".morph", "required for morphology");
        }
        break;
    case AugmentOp::HistEq:
    case AugmentOp::Edge:
        break;
    }
    return spec;
}

} // namespace

BuildConfig RunConfig::to_build_config() const {
    BuildConfig build;
    build.manifest_dir = manifest.parent_path();
    build.geometry = geometry;
    build.encoder = encoder;
    build.encoder.geometry = geometry;
    build.sampler = sampler;
    build.augments = augments;
    build.output_dir = output_dir;
    return build;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::vector<uint8_t> bytes;
    try {
        bytes = read_file_bytes(path);
    } catch (const ParseError& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config: " + path.string() + ": " + e.what());
    }
    if (!doc.is_object()) {
        throw std::invalid_argument("config: expected a JSON object");
    }

    FieldErrors errors;
    RunConfig config;
    const std::filesystem::path base = path.parent_path();

    if (doc.contains("manifest") && doc["manifest"].is_string()) {
        config.manifest = doc["manifest"].get<std::string>();
        if (config.manifest.is_relative()) config.manifest = base / config.manifest;
        if (!std::filesystem::exists(config.manifest)) {
            errors.add("manifest", "file not found: " + config.manifest.string());
        }
    } else {
        errors.add("manifest", "required string");
    }

    auto int_at = [](const nlohmann::json& obj, const char* key, int fallback) {
        if (!obj.contains(key) || !obj[key].is_number_integer()) return fallback;
        return obj[key].get<int>();
    };

    if (doc.contains("geometry") && doc["geometry"].is_object() &&
        int_at(doc["geometry"], "width", 0) >= 1 &&
        int_at(doc["geometry"], "height", 0) >= 1) {
        config.geometry = {doc["geometry"]["width"].get<int>(),
                           doc["geometry"]["height"].get<int>()};
    } else {
        errors.add("geometry", "required object with width >= 1 and height >= 1");
    }

    if (doc.contains("encoder") && doc["encoder"].is_object()) {
        const auto& enc = doc["encoder"];
        if (enc.contains("kind") && enc["kind"].is_string()) {
            auto kind = parse_encoder_kind(enc["kind"].get<std::string>());
            if (kind) {
                config.encoder.kind = *kind;
            } else {
                errors.add("encoder.kind", "must be 'frequency' or 'sae'");
            }
        } else {
            errors.add("encoder.kind", "required string");
        }
        if (enc.contains("fps")) {
            if (enc["fps"].is_number_integer() && enc["fps"].get<int>() >= 1) {
                config.encoder.fps = enc["fps"].get<int>();
            } else {
                errors.add("encoder.fps", "must be an integer >= 1");
            }
        }
        if (enc.contains("sae_polarity")) {
            auto pol = enc["sae_polarity"].is_string()
                           ? parse_sae_polarity(enc["sae_polarity"].get<std::string>())
                           : std::nullopt;
            if (pol) {
                config.encoder.sae_polarity = *pol;
            } else {
                errors.add("encoder.sae_polarity", "must be 'both', 'on' or 'off'");
            }
        }
    } else {
        errors.add("encoder", "required object");
    }

    if (doc.contains("sampler") && doc["sampler"].is_object()) {
        const auto& s = doc["sampler"];
        if (s.contains("window_seconds")) {
            if (s["window_seconds"].is_number_integer()) {
                config.sampler.window_seconds = s["window_seconds"].get<int>();
            } else {
                errors.add("sampler.window_seconds", "must be an integer");
            }
        }
        if (s.contains("clip_len")) {
            if (s["clip_len"].is_number_integer()) {
                config.sampler.clip_len = s["clip_len"].get<int>();
            } else {
                errors.add("sampler.clip_len", "must be an integer");
            }
        }
        if (s.contains("stride_us")) {
            if (s["stride_us"].is_number_integer()) {
                config.sampler.stride_us = s["stride_us"].get<int64_t>();
            } else {
                errors.add("sampler.stride_us", "must be an integer");
            }
            if (config.sampler.stride_us < 0) errors.add("sampler.stride_us", "must be >= 0");
        }
        if (s.contains("seed") && s["seed"].is_number_integer()) {
            config.sampler.seed = s["seed"].get<uint64_t>();
        } else {
            errors.add("sampler.seed", "required integer (reproducibility knob)");
        }
        if (s.contains("fps") &&
            (!s["fps"].is_number_integer() || s["fps"].get<int>() != config.encoder.fps)) {
            errors.add("sampler.fps", "must match encoder.fps when present");
        }
        config.sampler.fps = config.encoder.fps;
        if (config.sampler.window_seconds < 1) {
            errors.add("sampler.window_seconds", "must be >= 1");
        } else if (config.sampler.clip_len < 1 ||
                   int64_t(config.sampler.clip_len) >
                       int64_t(config.sampler.fps) * config.sampler.window_seconds) {
            errors.add("sampler.clip_len", "must be in [1, fps*window_seconds]");
        }
    } else {
        errors.add("sampler", "required object");
    }

    if (doc.contains("augments")) {
        if (!doc["augments"].is_array()) {
            errors.add("augments", "expected an array");
        } else {
            for (std::size_t i = 0; i < doc["augments"].size(); ++i) {
                config.augments.push_back(parse_augment_spec(
                    doc["augments"][i], "augments[" + std::to_string(i) + "]", errors));
            }
        }
    }

    if (doc.contains("output_dir") && doc["output_dir"].is_string() &&
        !doc["output_dir"].get<std::string>().empty()) {
        config.output_dir = doc["output_dir"].get<std::string>();
        if (config.output_dir.is_relative()) config.output_dir = base / config.output_dir;
    } else {
        errors.add("output_dir", "required non-empty string");
    }

    if (!errors.items.empty()) errors.raise();
    config.encoder.geometry = config.geometry;
    return config;
}

} // namespace evpipe
