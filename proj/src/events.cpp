#include "evpipe/events.hpp"

#include <algorithm>
#include <stdexcept>

namespace evpipe {

const char* to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::OutOfOrder: return "out-of-order";
    case ViolationKind::OutOfBounds: return "out-of-bounds";
    case ViolationKind::BadPolarity: return "bad-polarity";
    }
    return "unknown";
}

ValidationReport validate_stream(const EventStream& stream) {
    ValidationReport report;
    const auto& events = stream.events;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const Event& e = events[i];
        if (i > 0 && e.t < events[i - 1].t) {
            report.violations.push_back({i, ViolationKind::OutOfOrder});
        }
        if (!stream.geometry.contains(e.x, e.y)) {
            report.violations.push_back({i, ViolationKind::OutOfBounds});
        }
        if (e.p != 1 && e.p != -1) {
            report.violations.push_back({i, ViolationKind::BadPolarity});
        }
    }
    return report;
}

EventStream slice_window(const EventStream& stream, TimeWindow window) {
    if (!window.valid()) {
        throw std::invalid_argument("slice_window: t_start > t_end");
    }
    auto by_time = [](const Event& e, int64_t t) { return e.t < t; };
    auto first = std::lower_bound(stream.events.begin(), stream.events.end(),
                                  window.t_start, by_time);
    auto last = std::lower_bound(first, stream.events.end(), window.t_end, by_time);
    return EventStream{stream.geometry, std::vector<Event>(first, last)};
}

} // namespace evpipe
