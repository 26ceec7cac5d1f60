#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evpipe/baseline.hpp"
#include "evpipe/config.hpp"
#include "evpipe/dataset.hpp"
#include "evpipe/encoders.hpp"
#include "evpipe/errors.hpp"
#include "evpipe/ingest.hpp"
#include "evpipe/metrics.hpp"
#include "evpipe/pgm.hpp"

namespace fs = std::filesystem;
using namespace evpipe;

namespace {

SensorGeometry parse_geometry(const std::string& s) {
    auto sep = s.find('x');
    int w = 0, h = 0;
    if (sep != std::string::npos) {
        try {
            w = std::stoi(s.substr(0, sep));
            h = std::stoi(s.substr(sep + 1));
        } catch (...) {
            w = h = 0;
        }
    }
    if (w < 1 || h < 1) {
        throw std::invalid_argument("bad geometry '" + s + "', expected WxH with W,H >= 1");
    }
    return {w, h};
}

TimeWindow parse_window(const std::string& s) {
    auto sep = s.find(':');
    if (sep == std::string::npos) {
        throw std::invalid_argument("bad window '" + s + "', expected start:end microseconds");
    }
    TimeWindow w;
    try {
        w.t_start = std::stoll(s.substr(0, sep));
        w.t_end = std::stoll(s.substr(sep + 1));
    } catch (...) {
        throw std::invalid_argument("bad window '" + s + "', expected start:end microseconds");
    }
    if (w.t_start < 0 || !w.valid()) {
        throw std::invalid_argument("bad window '" + s + "': need 0 <= start <= end");
    }
    return w;
}

void write_text_file(const fs::path& path, const std::string& text) {
    write_file_bytes(path, std::span<const uint8_t>(
                               reinterpret_cast<const uint8_t*>(text.data()), text.size()));
}

struct ConvertArgs {
    std::string input;
    std::string from;
    std::string to;
    std::string geometry = "346x260";
    std::string output = "-";
    bool sort = false;
};

int run_convert(const ConvertArgs& args) {
    if (args.from != "text" && args.from != "binary") {
        throw std::invalid_argument("--from must be 'text' or 'binary'");
    }
    if (args.to != "text" && args.to != "binary") {
        throw std::invalid_argument("--to must be 'text' or 'binary'");
    }
    SensorGeometry geometry = parse_geometry(args.geometry);
    SortPolicy policy = args.sort ? SortPolicy::StableSort : SortPolicy::Reject;

    std::vector<uint8_t> bytes = read_file_bytes(args.input);
    EventStream stream;
    try {
        if (args.from == "text") {
            stream = parse_text_events(
                std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                geometry, policy);
        } else {
            stream = parse_binary_events(bytes, geometry, policy);
        }
    } catch (const ParseError& e) {
        throw ParseError(args.input + ": " + e.what());
    }

    std::vector<uint8_t> out;
    if (args.to == "text") {
        std::string text = write_text_events(stream);
        out.assign(text.begin(), text.end());
    } else {
        out = write_binary_events(stream);
    }
    if (args.output == "-") {
        std::fwrite(out.data(), 1, out.size(), stdout);
    } else {
        write_file_bytes(args.output, out);
    }
    return 0;
}

struct EncodeArgs {
    std::string recording;
    std::string encoder = "frequency";
    int fps = 25;
    std::string window;
    std::string geometry = "346x260";
    std::string sae_polarity = "both";
    std::string out_dir;
    bool sort = false;
};

int run_encode(const EncodeArgs& args) {
    auto kind = parse_encoder_kind(args.encoder);
    if (!kind) {
        throw std::invalid_argument("--encoder must be 'frequency' or 'sae'");
    }
    auto polarity = parse_sae_polarity(args.sae_polarity);
    if (!polarity) {
        throw std::invalid_argument("--sae-polarity must be 'both', 'on' or 'off'");
    }
    EncodingParams params;
    params.kind = *kind;
    params.fps = args.fps;
    params.geometry = parse_geometry(args.geometry);
    params.sae_polarity = *polarity;
    frame_interval_us(params.fps); // reject bad fps as a usage error

    EventStream stream = read_events_file(args.recording, params.geometry,
                                          args.sort ? SortPolicy::StableSort
                                                    : SortPolicy::Reject);
    TimeWindow span{0, 0};
    if (!args.window.empty()) {
        span = parse_window(args.window);
    } else if (!stream.events.empty()) {
        span = {stream.events.front().t, stream.events.back().t + 1};
    }

    std::vector<Frame> frames = encode_sequence(stream, params, span);
    write_frame_sequence(args.out_dir, frames, {params.geometry, params.fps, params.kind, span});
    std::cerr << "wrote " << frames.size() << " frames to " << args.out_dir << "\n";
    return 0;
}

int run_build(const std::string& config_path) {
    RunConfig config = load_run_config(config_path);
    std::vector<ManifestEntry> entries = load_manifest_file(config.manifest);
    BuildSummary summary = build_splits(entries, config.to_build_config());
    for (const std::string& w : summary.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    std::cout << summary.to_text();
    return 0;
}

std::vector<fs::path> sorted_clip_dirs(const fs::path& split_dir) {
    std::vector<fs::path> dirs;
    if (!fs::exists(split_dir)) return dirs;
    for (const auto& cls : fs::directory_iterator(split_dir)) {
        if (!cls.is_directory()) continue;
        for (const auto& clip : fs::directory_iterator(cls.path())) {
            if (clip.is_directory()) dirs.push_back(clip.path());
        }
    }
    std::sort(dirs.begin(), dirs.end());
    return dirs;
}

int run_bench(const std::string& config_path, const std::string& model_name) {
    if (model_name != "nearest-centroid") {
        throw std::invalid_argument("unknown model '" + model_name +
                                    "' (supported: nearest-centroid)");
    }
    RunConfig config = load_run_config(config_path);
    const fs::path out_dir = config.output_dir;

    auto load_split = [&](const char* split) {
        std::vector<ClipSample> clips;
        for (const fs::path& dir : sorted_clip_dirs(out_dir / split)) {
            clips.push_back(read_clip_archive(dir));
        }
        if (clips.empty()) {
            throw ParseError(std::string("missing split '") + split + "' under " +
                             out_dir.string() + " (run build first)");
        }
        return clips;
    };

    std::vector<ClipSample> train = load_split("train");
    std::vector<ClipSample> test = load_split("test");

    std::vector<std::pair<ClipFeature, int>> samples;
    samples.reserve(train.size());
    for (const ClipSample& clip : train) {
        samples.push_back({featurize(clip), clip.label.id});
    }
    CentroidModel model = fit(samples);

    std::vector<std::pair<int, int>> pairs;
    std::string prediction_lines;
    for (const ClipSample& clip : test) {
        int predicted = predict(model, featurize(clip));
        pairs.push_back({clip.label.id, predicted});
        prediction_lines += std::to_string(clip.label.id) + " " +
                            std::to_string(predicted) + "\n";
    }

    MetricsReport report = compute_metrics(confusion_from_pairs(pairs));
    std::map<std::string, MetricsReport> reports{{model_name, report}};
    std::cout << render_report(reports);

    nlohmann::json metrics{{model_name, report_to_json(report)}};
    write_text_file(out_dir / "metrics.json", metrics.dump(2) + "\n");
    write_text_file(out_dir / "predictions.txt", prediction_lines);
    write_text_file(out_dir / "model.json", model_to_json(model).dump(2) + "\n");
    return 0;
}

int run_score(const std::string& path) {
    std::vector<uint8_t> bytes = read_file_bytes(path);
    std::vector<std::pair<int, int>> pairs;
    try {
        pairs = parse_prediction_lines(
            std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (pairs.empty()) {
        throw ParseError(path + ": no prediction pairs");
    }
    MetricsReport report = compute_metrics(confusion_from_pairs(pairs));
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "accuracy %.3f\nprecision %.3f\nrecall %.3f\nf1 %.3f\n",
                  report.accuracy, report.precision, report.recall, report.f1);
    std::cout << buf;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"evpipe: event-camera recordings to encoded action-recognition clips"};
    app.require_subcommand(1);

    ConvertArgs convert_args;
    CLI::App* convert = app.add_subcommand("convert", "Transcode event files between formats");
    convert->add_option("input", convert_args.input, "input event file")->required();
    convert->add_option("--from", convert_args.from, "input format: text|binary")->required();
    convert->add_option("--to", convert_args.to, "output format: text|binary")->required();
    convert->add_option("--geometry", convert_args.geometry, "sensor size WxH (default 346x260)");
    convert->add_option("-o,--out", convert_args.output, "output path ('-' = stdout)");
    convert->add_flag("--sort", convert_args.sort, "stable-sort out-of-order timestamps");

    EncodeArgs encode_args;
    CLI::App* encode = app.add_subcommand("encode", "Encode a recording into a PGM frame sequence");
    encode->add_option("recording", encode_args.recording, "event recording file")->required();
    encode->add_option("--encoder", encode_args.encoder, "frequency|sae");
    encode->add_option("--fps", encode_args.fps, "frames per second (default 25)");
    encode->add_option("--window", encode_args.window, "start:end in microseconds");
    encode->add_option("--geometry", encode_args.geometry, "sensor size WxH (default 346x260)");
    encode->add_option("--sae-polarity", encode_args.sae_polarity, "both|on|off");
    encode->add_option("--out", encode_args.out_dir, "output archive directory")->required();
    encode->add_flag("--sort", encode_args.sort, "stable-sort out-of-order timestamps");

    std::string build_config;
    CLI::App* build = app.add_subcommand("build", "Build train/validation/test clip archives");
    build->add_option("config", build_config, "run configuration JSON")->required();

    std::string bench_config;
    std::string bench_model = "nearest-centroid";
    CLI::App* bench = app.add_subcommand("bench", "Train and evaluate the baseline on a built dataset");
    bench->add_option("config", bench_config, "run configuration JSON")->required();
    bench->add_option("--model", bench_model, "model name (nearest-centroid)");

    std::string score_file;
    CLI::App* score = app.add_subcommand("score", "Score a 'true predicted' pairs file");
    score->add_option("file", score_file, "prediction pairs file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (convert->parsed()) return run_convert(convert_args);
        if (encode->parsed()) return run_encode(encode_args);
        if (build->parsed()) return run_build(build_config);
        if (bench->parsed()) return run_bench(bench_config, bench_model);
        if (score->parsed()) return run_score(score_file);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
