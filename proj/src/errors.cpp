#include "accstab/errors.hpp"

namespace accstab {

const char* to_string(ErrorCategory c) noexcept {
    switch (c) {
        case ErrorCategory::dimension: return "dimension";
        case ErrorCategory::domain: return "domain";
        case ErrorCategory::bracket: return "bracket";
        case ErrorCategory::convergence: return "convergence";
        case ErrorCategory::divergence: return "divergence";
        case ErrorCategory::saturation: return "saturation";
        case ErrorCategory::grazing: return "grazing";
        case ErrorCategory::pole: return "pole";
        case ErrorCategory::range: return "range";
        case ErrorCategory::insufficient_data: return "insufficient_data";
        case ErrorCategory::unsupported_topology: return "unsupported_topology";
        case ErrorCategory::sweep: return "sweep";
        case ErrorCategory::config: return "config";
        case ErrorCategory::io: return "io";
    }
    return "unknown";
}

int exit_code(ErrorCategory c) noexcept {
    switch (c) {
        case ErrorCategory::dimension: return 10;
        case ErrorCategory::domain: return 11;
        case ErrorCategory::bracket: return 12;
        case ErrorCategory::convergence: return 13;
        case ErrorCategory::divergence: return 14;
        case ErrorCategory::saturation: return 15;
        case ErrorCategory::grazing: return 16;
        case ErrorCategory::pole: return 17;
        case ErrorCategory::range: return 18;
        case ErrorCategory::insufficient_data: return 19;
        case ErrorCategory::unsupported_topology: return 20;
        case ErrorCategory::sweep: return 21;
        case ErrorCategory::config: return 22;
        case ErrorCategory::io: return 23;
    }
    return 1;
}

}  // namespace accstab
