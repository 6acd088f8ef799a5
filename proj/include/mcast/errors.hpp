#pragma once

#include <stdexcept>
#include <string>

namespace mcast {

// Exit-code contract: 0 success, 1 validation failure, 2 missing input,
// 3 protocol violation.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
    static constexpr int exit_code = 1;
};

struct MissingInputError : std::runtime_error {
    explicit MissingInputError(const std::string& msg) : std::runtime_error(msg) {}
    static constexpr int exit_code = 2;
};

struct ProtocolError : std::runtime_error {
    explicit ProtocolError(const std::string& msg) : std::runtime_error(msg) {}
    static constexpr int exit_code = 3;
};

// Transient HTTP-level failure; the caller may retry.
struct RetryableError : std::runtime_error {
    RetryableError(const std::string& msg, int status) : std::runtime_error(msg), status(status) {}
    int status;
};

} // namespace mcast
