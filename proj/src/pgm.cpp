#include "evpipe/pgm.hpp"

#include <cstdio>
#include <string>

#include <json.hpp>

#include "evpipe/errors.hpp"
#include "evpipe/ingest.hpp"

namespace evpipe {

namespace {

// Header scanner: whitespace-separated tokens, '#' comments to end of line.
struct PnmCursor {
    std::span<const uint8_t> bytes;
    std::size_t pos = 0;

    void skip_space_and_comments() {
        while (pos < bytes.size()) {
            uint8_t c = bytes[pos];
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                ++pos;
            } else {
                break;
            }
        }
    }

    int64_t next_int() {
        skip_space_and_comments();
        std::size_t start = pos;
        while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') ++pos;
        if (pos == start) throw ParseError("pgm: expected integer in header");
        int64_t v = 0;
        for (std::size_t i = start; i < pos; ++i) {
            v = v * 10 + (bytes[i] - '0');
            if (v > 1'000'000'000) throw ParseError("pgm: header value too large");
        }
        return v;
    }
};

} // namespace

std::vector<uint8_t> encode_pgm(const Frame& frame) {
    char header[64];
    int n = std::snprintf(header, sizeof header, "P5\n%d %d\n255\n",
                          frame.geometry.width, frame.geometry.height);
    std::vector<uint8_t> out(header, header + n);
    out.insert(out.end(), frame.pixels.begin(), frame.pixels.end());
    return out;
}

Frame parse_pgm(std::span<const uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw ParseError("pgm: expected P5 magic");
    }
    PnmCursor cur{bytes, 2};
    int64_t w = cur.next_int();
    int64_t h = cur.next_int();
    int64_t maxval = cur.next_int();
    if (w < 1 || h < 1) throw ParseError("pgm: bad dimensions");
    if (maxval != 255) throw ParseError("pgm: only maxval 255 supported");
    if (cur.pos >= bytes.size()) throw ParseError("pgm: missing pixel data");
    ++cur.pos; // single whitespace byte after maxval

    std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (bytes.size() - cur.pos < need) {
        throw ParseError("pgm: truncated pixel data");
    }
    Frame frame{SensorGeometry{static_cast<int>(w), static_cast<int>(h)}, {}};
    frame.pixels.assign(bytes.begin() + cur.pos, bytes.begin() + cur.pos + need);
    return frame;
}

void write_pgm_file(const std::filesystem::path& path, const Frame& frame) {
    write_file_bytes(path, encode_pgm(frame));
}

Frame read_pgm_file(const std::filesystem::path& path) {
    std::vector<uint8_t> bytes = read_file_bytes(path);
    try {
        return parse_pgm(bytes);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::filesystem::path frame_file_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%05zu.pgm", index);
    return buf;
}

void write_frame_sequence(const std::filesystem::path& dir, const std::vector<Frame>& frames,
                          const SequenceMeta& meta) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        write_pgm_file(dir / frame_file_name(i), frames[i]);
    }
    nlohmann::json j{
        {"encoder", to_string(meta.kind)},
        {"fps", meta.fps},
        {"geometry", {{"width", meta.geometry.width}, {"height", meta.geometry.height}}},
        {"window", {{"t_start_us", meta.window.t_start}, {"t_end_us", meta.window.t_end}}},
        {"frames", frames.size()},
    };
    std::string text = j.dump(2) + "\n";
    write_file_bytes(dir / "meta.json",
                     std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(text.data()),
                                              text.size()));
}

} // namespace evpipe
