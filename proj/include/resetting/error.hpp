#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace resetting {

/// Machine-readable failure class carried by every exception the library throws.
enum class ErrorCategory {
    usage,           ///< malformed command line or request
    domain,          ///< argument outside an operation's precondition
    overflow,        ///< result not representable in double precision
    non_convergence, ///< iterative solver or quadrature gave up
    io,              ///< file could not be read or written
};

inline std::string_view category_name(ErrorCategory c) noexcept {
    switch (c) {
        case ErrorCategory::usage: return "usage";
        case ErrorCategory::domain: return "domain";
        case ErrorCategory::overflow: return "overflow";
        case ErrorCategory::non_convergence: return "non_convergence";
        case ErrorCategory::io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& what) {
    throw Error(category, what);
}

inline void require(bool condition, const std::string& what) {
    if (!condition) fail(ErrorCategory::domain, what);
}

} // namespace resetting
