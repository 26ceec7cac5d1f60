#include "evpipe/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "evpipe/errors.hpp"

namespace evpipe {

namespace {

const char* kClassNames[] = {
    "arm-crossing", "falling-down", "getting-up",     "jumping",
    "kicking",      "picking-up",   "sit-down",       "throwing",
    "turning-around", "tying-shoes", "walking",        "waving",
};

std::vector<ClassLabel> make_taxonomy() {
    std::vector<ClassLabel> v;
    int id = 0;
    for (const char* name : kClassNames) {
        v.push_back({id++, name});
    }
    return v;
}

[[noreturn]] void line_error(std::size_t line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

int64_t parse_int64_token(std::string_view tok, std::size_t line) {
    int64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        line_error(line, "invalid number '" + std::string(tok) + "'");
    }
    return value;
}

void check_bounds(int64_t x, int64_t y, SensorGeometry g, std::size_t line) {
    if (x < 0 || x >= g.width) {
        line_error(line, "x out of bounds (x=" + std::to_string(x) +
                             ", width=" + std::to_string(g.width) + ")");
    }
    if (y < 0 || y >= g.height) {
        line_error(line, "y out of bounds (y=" + std::to_string(y) +
                             ", height=" + std::to_string(g.height) + ")");
    }
}

void require_geometry(SensorGeometry g) {
    if (!g.valid()) {
        throw std::invalid_argument("geometry must be at least 1x1");
    }
}

uint64_t read_le(const uint8_t* p, int n) {
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
        v |= static_cast<uint64_t>(p[i]) << (8 * i);
    }
    return v;
}

void push_le(std::vector<uint8_t>& out, uint64_t v, int n) {
    for (int i = 0; i < n; ++i) {
        out.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
}

void finish_order(std::vector<Event>& events, SortPolicy policy,
                  const std::string& where) {
    for (std::size_t i = 1; i < events.size(); ++i) {
        if (events[i].t < events[i - 1].t) {
            if (policy == SortPolicy::StableSort) {
                std::stable_sort(events.begin(), events.end(),
                                 [](const Event& a, const Event& b) { return a.t < b.t; });
                return;
            }
            throw ParseError(where + ": unsorted timestamps (" +
                             std::to_string(events[i].t) + " after " +
                             std::to_string(events[i - 1].t) +
                             "); rerun with sort recovery to reorder");
        }
    }
}

constexpr char kMagic[4] = {'E', 'V', 'T', '1'};
constexpr std::size_t kRecordSize = 13;

} // namespace

const std::vector<ClassLabel>& class_taxonomy() {
    static const std::vector<ClassLabel> taxonomy = make_taxonomy();
    return taxonomy;
}

const ClassLabel* find_class(std::string_view name) {
    for (const ClassLabel& c : class_taxonomy()) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

const ClassLabel& class_by_id(int id) {
    const auto& taxonomy = class_taxonomy();
    if (id < 0 || static_cast<std::size_t>(id) >= taxonomy.size()) {
        throw std::out_of_range("class id " + std::to_string(id) + " out of range");
    }
    return taxonomy[id];
}

const char* to_string(Split split) {
    switch (split) {
    case Split::Train: return "train";
    case Split::Validation: return "validation";
    case Split::Test: return "test";
    }
    return "unknown";
}

std::optional<Split> parse_split(std::string_view s) {
    if (s == "train") return Split::Train;
    if (s == "validation") return Split::Validation;
    if (s == "test") return Split::Test;
    return std::nullopt;
}

EventStream parse_text_events(std::string_view bytes, SensorGeometry geometry,
                              SortPolicy policy) {
    require_geometry(geometry);
    EventStream stream{geometry, {}};
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        std::size_t eol = bytes.find('\n', pos);
        std::string_view line = bytes.substr(pos, eol == std::string_view::npos
                                                      ? std::string_view::npos
                                                      : eol - pos);
        pos = eol == std::string_view::npos ? bytes.size() : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;

        std::string_view toks[4];
        std::size_t ntok = 0;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            if (i >= line.size()) break;
            std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
            if (ntok == 4) line_error(line_no, "expected 4 fields, got more");
            toks[ntok++] = line.substr(start, i - start);
        }
        if (ntok != 4) {
            line_error(line_no, "expected 4 fields, got " + std::to_string(ntok));
        }

        int64_t t = parse_int64_token(toks[0], line_no);
        if (t < 0) line_error(line_no, "negative timestamp");
        int64_t x = parse_int64_token(toks[1], line_no);
        int64_t y = parse_int64_token(toks[2], line_no);
        int64_t p = parse_int64_token(toks[3], line_no);
        check_bounds(x, y, geometry, line_no);
        if (p != 0 && p != 1) line_error(line_no, "polarity must be 0 or 1");

        stream.events.push_back(Event{t, static_cast<uint16_t>(x),
                                      static_cast<uint16_t>(y),
                                      static_cast<int8_t>(p == 1 ? 1 : -1)});
    }
    finish_order(stream.events, policy, "text input");
    return stream;
}

EventStream parse_binary_events(std::span<const uint8_t> bytes, SensorGeometry geometry,
                                SortPolicy policy) {
    require_geometry(geometry);
    if (bytes.size() < 4 || !std::equal(kMagic, kMagic + 4, bytes.begin())) {
        throw ParseError("bad magic: expected EVT1 header");
    }
    std::size_t payload = bytes.size() - 4;
    if (payload % kRecordSize != 0) {
        std::size_t offset = 4 + (payload / kRecordSize) * kRecordSize;
        throw ParseError("truncated record at byte offset " + std::to_string(offset));
    }

    EventStream stream{geometry, {}};
    std::size_t n = payload / kRecordSize;
    stream.events.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const uint8_t* rec = bytes.data() + 4 + i * kRecordSize;
        std::size_t offset = 4 + i * kRecordSize;
        uint64_t t_raw = read_le(rec, 8);
        if (t_raw > static_cast<uint64_t>(INT64_MAX)) {
            throw ParseError("record at byte offset " + std::to_string(offset) +
                             ": timestamp out of range");
        }
        int64_t x = static_cast<int64_t>(read_le(rec + 8, 2));
        int64_t y = static_cast<int64_t>(read_le(rec + 10, 2));
        uint8_t p = rec[12];
        if (x >= geometry.width || y >= geometry.height) {
            throw ParseError("record at byte offset " + std::to_string(offset) +
                             ": coordinate out of bounds");
        }
        if (p > 1) {
            throw ParseError("record at byte offset " + std::to_string(offset) +
                             ": polarity byte must be 0 or 1");
        }
        stream.events.push_back(Event{static_cast<int64_t>(t_raw),
                                      static_cast<uint16_t>(x), static_cast<uint16_t>(y),
                                      static_cast<int8_t>(p == 1 ? 1 : -1)});
    }
    finish_order(stream.events, policy, "binary input");
    return stream;
}

std::string write_text_events(const EventStream& stream) {
    std::string out;
    out.reserve(stream.events.size() * 16);
    char buf[64];
    for (const Event& e : stream.events) {
        int n = std::snprintf(buf, sizeof buf, "%lld %u %u %d\n",
                              static_cast<long long>(e.t), unsigned(e.x), unsigned(e.y),
                              e.p == 1 ? 1 : 0);
        out.append(buf, static_cast<std::size_t>(n));
    }
    return out;
}

std::vector<uint8_t> write_binary_events(const EventStream& stream) {
    std::vector<uint8_t> out;
    out.reserve(4 + stream.events.size() * kRecordSize);
    out.insert(out.end(), kMagic, kMagic + 4);
    for (const Event& e : stream.events) {
        push_le(out, static_cast<uint64_t>(e.t), 8);
        push_le(out, e.x, 2);
        push_le(out, e.y, 2);
        out.push_back(e.p == 1 ? 1 : 0);
    }
    return out;
}

std::vector<ManifestEntry> load_manifest(std::string_view json_bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_bytes);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("manifest: ") + e.what());
    }
    if (!doc.is_array()) {
        throw ParseError("manifest: expected a JSON array");
    }

    std::vector<ManifestEntry> entries;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& item = doc[i];
        auto entry_error = [i](const std::string& what) -> ParseError {
            return ParseError("manifest entry " + std::to_string(i) + ": " + what);
        };
        if (!item.is_object()) throw entry_error("expected an object");
        for (const char* key : {"path", "class", "split"}) {
            if (!item.contains(key) || !item[key].is_string()) {
                throw entry_error(std::string("missing string field '") + key + "'");
            }
        }
        if (!item.contains("duration_us") || !item["duration_us"].is_number_integer()) {
            throw entry_error("missing integer field 'duration_us'");
        }

        ManifestEntry entry;
        entry.path = item["path"].get<std::string>();
        if (entry.path.empty()) throw entry_error("empty path");
        if (!seen.insert(entry.path).second) {
            throw entry_error("duplicate path '" + entry.path + "'");
        }
        std::string cls = item["class"].get<std::string>();
        const ClassLabel* label = find_class(cls);
        if (!label) throw entry_error("unknown class '" + cls + "'");
        entry.label = *label;
        std::string split_str = item["split"].get<std::string>();
        auto split = parse_split(split_str);
        if (!split) throw entry_error("unknown split '" + split_str + "'");
        entry.split = *split;
        entry.duration_us = item["duration_us"].get<int64_t>();
        if (entry.duration_us < 0) throw entry_error("negative duration_us");
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::vector<ManifestEntry> load_manifest_file(const std::filesystem::path& path) {
    std::vector<uint8_t> bytes = read_file_bytes(path);
    try {
        return load_manifest(std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                              bytes.size()));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ParseError("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw ParseError("short write to " + path.string());
    }
}

EventStream read_events_file(const std::filesystem::path& path, SensorGeometry geometry,
                             SortPolicy policy) {
    std::vector<uint8_t> bytes = read_file_bytes(path);
    try {
        if (bytes.size() >= 4 && std::equal(kMagic, kMagic + 4, bytes.begin())) {
            return parse_binary_events(bytes, geometry, policy);
        }
        return parse_text_events(std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                                  bytes.size()),
                                 geometry, policy);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

} // namespace evpipe
