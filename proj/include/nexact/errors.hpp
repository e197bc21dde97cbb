#pragma once
#include <stdexcept>
#include <string>

namespace nexact {

/* Error taxonomy mirrors the process exit codes: bad input (1), a configured
 * cap cut the computation short (2), an internal self-check failed (3). */

struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CapError : std::runtime_error {
    explicit CapError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InternalError : std::logic_error {
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

inline void internal_check(bool ok, const std::string& msg) {
    if (!ok) throw InternalError("invariant violated: " + msg);
}

}  // namespace nexact
