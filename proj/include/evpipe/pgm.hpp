#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "evpipe/encoders.hpp"
#include "evpipe/events.hpp"

namespace evpipe {

// Binary PGM (P5, maxval 255). The writer is canonical and bit-exact:
// "P5\n<w> <h>\n255\n" followed by row-major pixel bytes.
std::vector<uint8_t> encode_pgm(const Frame& frame);
Frame parse_pgm(std::span<const uint8_t> bytes);

void write_pgm_file(const std::filesystem::path& path, const Frame& frame);
Frame read_pgm_file(const std::filesystem::path& path);

struct SequenceMeta {
    SensorGeometry geometry;
    int fps = 25;
    EncoderKind kind = EncoderKind::Frequency;
    TimeWindow window;
};

// Frame-sequence archive: a directory of zero-padded frame_%05d.pgm
// plus meta.json with geometry, fps, encoder kind and window bounds.
void write_frame_sequence(const std::filesystem::path& dir, const std::vector<Frame>& frames,
                          const SequenceMeta& meta);

std::filesystem::path frame_file_name(std::size_t index);

} // namespace evpipe
