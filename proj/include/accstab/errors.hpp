#pragma once

#include <stdexcept>
#include <string>

namespace accstab {

/// Failure taxonomy shared by the library and the CLI. Every category maps to
/// a distinct process exit code so scripted callers can branch on the cause.
enum class ErrorCategory {
    dimension,
    domain,
    bracket,
    convergence,
    divergence,
    saturation,
    grazing,
    pole,
    range,
    insufficient_data,
    unsupported_topology,
    sweep,
    config,
    io,
};

const char* to_string(ErrorCategory c) noexcept;
int exit_code(ErrorCategory c) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

[[noreturn]] inline void raise(ErrorCategory c, const std::string& message) {
    throw Error(c, message);
}

}  // namespace accstab
