#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evpipe/events.hpp"

namespace evpipe {

struct ClassLabel {
    int id = 0;
    std::string name;

    friend bool operator==(const ClassLabel&, const ClassLabel&) = default;
};

// The 12 combined action classes, alphabetical on kebab-case names,
// ids assigned in that order. The two classes shared between the fall
// and action sets (picking-up, sit-down) appear once.
const std::vector<ClassLabel>& class_taxonomy();
const ClassLabel* find_class(std::string_view name);
const ClassLabel& class_by_id(int id);

enum class Split { Train, Validation, Test };

const char* to_string(Split split);
std::optional<Split> parse_split(std::string_view s);

struct ManifestEntry {
    std::string path;
    ClassLabel label;
    Split split = Split::Train;
    int64_t duration_us = 0;
};

// Out-of-order timestamps in an input file are an error by default;
// StableSort is the explicit recovery (CLI --sort).
enum class SortPolicy { Reject, StableSort };

// Text format: UTF-8 lines "t x y p", '#' comment lines ignored,
// p in {0,1} with 1 = ON. Errors carry 1-based line numbers.
EventStream parse_text_events(std::string_view bytes, SensorGeometry geometry,
                              SortPolicy policy = SortPolicy::Reject);

// Binary format: magic "EVT1", then 13-byte little-endian records:
// u64 t, u16 x, u16 y, u8 p (0 or 1).
EventStream parse_binary_events(std::span<const uint8_t> bytes, SensorGeometry geometry,
                                SortPolicy policy = SortPolicy::Reject);

// Canonical writers: single spaces, '\n' terminators, no comments;
// binary records in stream order.
std::string write_text_events(const EventStream& stream);
std::vector<uint8_t> write_binary_events(const EventStream& stream);

// Manifest: JSON array of {"path","class","split","duration_us"}.
// Unknown class names and duplicate paths are rejected.
std::vector<ManifestEntry> load_manifest(std::string_view json_bytes);
std::vector<ManifestEntry> load_manifest_file(const std::filesystem::path& path);

// Whole-file helpers; format is sniffed from the "EVT1" magic.
std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const uint8_t> bytes);
EventStream read_events_file(const std::filesystem::path& path, SensorGeometry geometry,
                             SortPolicy policy = SortPolicy::Reject);

} // namespace evpipe
