#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "evpipe/events.hpp"

namespace evpipe {

// Rounding used by every pixel-producing path in the project: half away
// from zero, so cross-implementation outputs stay bit-identical.
inline int64_t round_half_away(double v) { return std::llround(v); }

enum class EncoderKind { Frequency, Sae };

const char* to_string(EncoderKind kind);
std::optional<EncoderKind> parse_encoder_kind(std::string_view s);

// Which polarity feeds the time surface. The default uses the most
// recent event of either polarity.
enum class SaePolarity { Both, OnOnly, OffOnly };

const char* to_string(SaePolarity pol);
std::optional<SaePolarity> parse_sae_polarity(std::string_view s);

struct EncodingParams {
    EncoderKind kind = EncoderKind::Frequency;
    int fps = 25;
    SensorGeometry geometry;
    SaePolarity sae_polarity = SaePolarity::Both;
};

// Sub-window length in microseconds for a given frame rate.
// fps must be in [1, 1e6].
int64_t frame_interval_us(int fps);

// Per pixel, accumulate (ON count) - (OFF count), then range-normalize
// the signed counts onto [0,255]. A frame with no spread (max == min,
// including the empty window) is all zeros.
Frame frequency_encode(const EventStream& window_events, TimeWindow window);

// Surface of Active Events: per pixel, the most recent event timestamp
// mapped affinely from [t_start, t_end) onto [0,255]; pixels with no
// events stay 0. A zero-length window maps event-bearing pixels to 255.
Frame sae_encode(const EventStream& window_events, TimeWindow window,
                 SaePolarity polarity = SaePolarity::Both);

// Partitions span into consecutive half-open sub-windows of
// frame_interval_us(params.fps), drops the final partial window, and
// encodes each with the selected encoder. 3 s at 25 FPS gives 75 frames.
std::vector<Frame> encode_sequence(const EventStream& stream, const EncodingParams& params,
                                   TimeWindow span);

} // namespace evpipe
