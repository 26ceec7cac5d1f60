#pragma once

#include <stdexcept>
#include <string>

namespace evpipe {

// Data-level failure: malformed bytes, unreadable recording, bad label.
// The CLI maps ParseError to exit code 1; usage and configuration
// problems travel as std::invalid_argument and map to exit code 2.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace evpipe
