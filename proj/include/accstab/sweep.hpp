#pragma once

#include <string>
#include <vector>

#include "accstab/converter.hpp"
#include "accstab/sampled_data.hpp"

namespace accstab {

struct SweepOptions {
    double k_min = 0.14;             // omega_p / omega_s range
    double k_max = 0.81;
    int grid_count = 35;
    double boundary_tol_frac = 0.002;  // bisection bracket width, fraction of omega_s
    double duty_guess = 0.5;
    double stability_tol = 1e-6;
    bool parallel = true;

    void validate() const;
};

struct SweepPoint {
    double omega_p = 0.0;
    double k = 0.0;
    bool solved = false;
    std::string error;              // set when !solved
    double duty_fraction = 0.0;
    ComplexList eigs;
    double max_magnitude = 0.0;
    StabilityClass verdict = StabilityClass::stable;
    bool marginal = false;
    double averaged_max_re = 0.0;   // max Re of the averaged-model poles
};

struct BifurcationBoundary {
    double omega_lo = 0.0, omega_hi = 0.0;  // final bracket, contains the verdict change
    double omega_p = 0.0;                   // bracket midpoint
    Complex dominant;                       // dominant eigenvalue of phi at the midpoint
    StabilityClass verdict_lo = StabilityClass::stable;
    StabilityClass verdict_hi = StabilityClass::stable;
};

struct SweepReport {
    SweepOptions options;
    std::vector<SweepPoint> points;          // sorted by omega_p
    std::vector<BifurcationBoundary> boundaries;
};

/// Evaluates orbit + linearization + classification at one compensator pole.
SweepPoint evaluate_pole(const ConverterParams& base, double omega_p, double duty_guess,
                         double stability_tol);

/// Grid sweep of the compensator pole with bisection refinement of every
/// stable/unstable boundary. Failed grid points are recorded as gaps.
SweepReport run_sweep(const ConverterParams& base, const SweepOptions& opts);

}  // namespace accstab
