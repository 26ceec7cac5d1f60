#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace evpipe {

struct SensorGeometry {
    int width = 0;
    int height = 0;

    bool valid() const { return width >= 1 && height >= 1; }
    bool contains(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
    friend bool operator==(const SensorGeometry&, const SensorGeometry&) = default;
};

// One sensor spike. Timestamps are microseconds, non-negative.
// Polarity is stored canonically as +1 (ON, brightness increase) or
// -1 (OFF, brightness decrease); file formats that use {0,1} are mapped
// on ingest.
struct Event {
    int64_t t = 0;
    uint16_t x = 0;
    uint16_t y = 0;
    int8_t p = 1;

    friend bool operator==(const Event&, const Event&) = default;
};

// Half-open interval [t_start, t_end) in microseconds.
struct TimeWindow {
    int64_t t_start = 0;
    int64_t t_end = 0;

    int64_t length() const { return t_end - t_start; }
    bool valid() const { return t_start <= t_end; }
    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

// Time-ordered event sequence with its sensor geometry. Events must be
// sorted by t (ties keep input order) and lie within the geometry;
// validate_stream checks both.
struct EventStream {
    SensorGeometry geometry;
    std::vector<Event> events;
};

// 8-bit single-channel image, row-major, pixels.size() == width*height.
struct Frame {
    SensorGeometry geometry;
    std::vector<uint8_t> pixels;

    static Frame zeros(SensorGeometry g) {
        return Frame{g, std::vector<uint8_t>(g.pixel_count(), 0)};
    }
    uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * geometry.width + x];
    }
    uint8_t& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * geometry.width + x];
    }
    friend bool operator==(const Frame&, const Frame&) = default;
};

enum class ViolationKind { OutOfOrder, OutOfBounds, BadPolarity };

const char* to_string(ViolationKind kind);

struct Violation {
    std::size_t index = 0;
    ViolationKind kind = ViolationKind::OutOfOrder;

    friend bool operator==(const Violation&, const Violation&) = default;
};

// Violations are data, not failures: an invalid stream yields a report,
// never an exception.
struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

ValidationReport validate_stream(const EventStream& stream);

// Events with t_start <= t < t_end, order preserved, geometry copied.
// Binary search over the sorted timestamps. Throws std::invalid_argument
// on t_start > t_end.
EventStream slice_window(const EventStream& stream, TimeWindow window);

} // namespace evpipe
