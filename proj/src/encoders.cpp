#include "evpipe/encoders.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace evpipe {

const char* to_string(EncoderKind kind) {
    return kind == EncoderKind::Frequency ? "frequency" : "sae";
}

std::optional<EncoderKind> parse_encoder_kind(std::string_view s) {
    if (s == "frequency") return EncoderKind::Frequency;
    if (s == "sae") return EncoderKind::Sae;
    return std::nullopt;
}

const char* to_string(SaePolarity pol) {
    switch (pol) {
    case SaePolarity::Both: return "both";
    case SaePolarity::OnOnly: return "on";
    case SaePolarity::OffOnly: return "off";
    }
    return "unknown";
}

std::optional<SaePolarity> parse_sae_polarity(std::string_view s) {
    if (s == "both") return SaePolarity::Both;
    if (s == "on") return SaePolarity::OnOnly;
    if (s == "off") return SaePolarity::OffOnly;
    return std::nullopt;
}

int64_t frame_interval_us(int fps) {
    if (fps < 1 || fps > 1'000'000) {
        throw std::invalid_argument("fps must be in [1, 1000000]");
    }
    return 1'000'000 / fps;
}

Frame frequency_encode(const EventStream& window_events, TimeWindow window) {
    (void)window; // accumulation uses counts only; bounds are the caller's contract
    const SensorGeometry g = window_events.geometry;
    std::vector<int64_t> acc(g.pixel_count(), 0);
    for (const Event& e : window_events.events) {
        acc[static_cast<std::size_t>(e.y) * g.width + e.x] += e.p > 0 ? 1 : -1;
    }

    const auto [lo, hi] = std::minmax_element(acc.begin(), acc.end());
    Frame frame = Frame::zeros(g);
    if (acc.empty() || *lo == *hi) {
        return frame;
    }
    const double min_v = static_cast<double>(*lo);
    const double span = static_cast<double>(*hi - *lo);
    for (std::size_t i = 0; i < acc.size(); ++i) {
        frame.pixels[i] = static_cast<uint8_t>(
            round_half_away(255.0 * (static_cast<double>(acc[i]) - min_v) / span));
    }
    return frame;
}

Frame sae_encode(const EventStream& window_events, TimeWindow window, SaePolarity polarity) {
    const SensorGeometry g = window_events.geometry;
    constexpr int64_t kNone = std::numeric_limits<int64_t>::min();
    std::vector<int64_t> last(g.pixel_count(), kNone);
    for (const Event& e : window_events.events) {
        if (polarity == SaePolarity::OnOnly && e.p <= 0) continue;
        if (polarity == SaePolarity::OffOnly && e.p > 0) continue;
        int64_t& slot = last[static_cast<std::size_t>(e.y) * g.width + e.x];
        slot = std::max(slot, e.t);
    }

    Frame frame = Frame::zeros(g);
    const int64_t len = window.length();
    for (std::size_t i = 0; i < last.size(); ++i) {
        if (last[i] == kNone) continue;
        if (len == 0) {
            frame.pixels[i] = 255;
        } else {
            frame.pixels[i] = static_cast<uint8_t>(round_half_away(
                255.0 * static_cast<double>(last[i] - window.t_start) /
                static_cast<double>(len)));
        }
    }
    return frame;
}

std::vector<Frame> encode_sequence(const EventStream& stream, const EncodingParams& params,
                                   TimeWindow span) {
    if (!span.valid()) {
        throw std::invalid_argument("encode_sequence: invalid span");
    }
    const int64_t interval = frame_interval_us(params.fps);
    const int64_t count = span.length() / interval;

    std::vector<Frame> frames;
    frames.reserve(static_cast<std::size_t>(count));
    for (int64_t k = 0; k < count; ++k) {
        TimeWindow w{span.t_start + k * interval, span.t_start + (k + 1) * interval};
        EventStream sub = slice_window(stream, w);
        if (params.kind == EncoderKind::Frequency) {
            frames.push_back(frequency_encode(sub, w));
        } else {
            frames.push_back(sae_encode(sub, w, params.sae_polarity));
        }
    }
    return frames;
}

} // namespace evpipe
