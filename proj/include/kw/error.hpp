#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kw {

enum class ErrorKind {
    structural,     // mismatched fields, truncations or (p, f) parameters
    degenerate,     // a structure constant vanishes
    domain,         // argument outside the documented range
    truncation,     // series not known to enough precision
    not_in_kernel,  // base-p congruence fails
    resource,       // enumeration too large
    internal,       // a proved invariant failed to hold
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::structural: return "structural";
        case ErrorKind::degenerate: return "degenerate";
        case ErrorKind::domain: return "domain";
        case ErrorKind::truncation: return "truncation";
        case ErrorKind::not_in_kernel: return "not_in_kernel";
        case ErrorKind::resource: return "resource";
        case ErrorKind::internal: return "internal";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string &detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &detail) { throw Error(kind, detail); }

inline void require(bool condition, ErrorKind kind, const std::string &detail) {
    if (!condition) fail(kind, detail);
}

} // namespace kw
