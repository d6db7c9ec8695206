#pragma once

#include <cstddef>
#include <vector>

#include "accstab/converter.hpp"
#include "accstab/numerics.hpp"

namespace accstab {

enum class Saturation { none, full_on, full_off };

struct Sample {
    double t = 0.0;   // seconds
    Vector x;
    double y = 0.0;   // comparator input C x + D u [V]
    double h = 0.0;   // ramp value [V]
};

struct CycleResult {
    Vector x_end;
    double duty_time = 0.0;  // d in [0, T], seconds
    Saturation saturated = Saturation::none;
    int crossing_count = 0;  // sign changes of y - h seen on the scan grid
    std::vector<Sample> samples;  // dense output, cycle-local times; plotting only
};

struct Trajectory {
    std::vector<Sample> samples;
    std::vector<std::size_t> cycle_boundaries;  // index of each cycle's first sample
    std::vector<double> duties;                 // one duty time per completed cycle
    std::vector<Vector> strobe;                 // x(nT), n = 0..n_cycles
};

/// Divergence during simulation, carrying whatever was completed.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& message, std::size_t cycle_index, Trajectory partial)
        : Error(ErrorCategory::divergence, message),
          cycle_index(cycle_index),
          partial(std::move(partial)) {}

    std::size_t cycle_index;
    Trajectory partial;
};

/// Exact affine-stage propagation x(t) = e^{a t} x0 + (int_0^t e^{a s} ds) b u.
Vector propagate_stage(const Matrix& a, const Matrix& b, const Eigen::Vector2d& u,
                       const Vector& x0, double t);

/// One clock period of the trailing-edge PWM cycle: start in S1, locate the
/// first downward crossing of y through the ramp, then S2 until the clock
/// edge. Propagation is exact (matrix exponentials); the crossing is polished
/// to 1e-12 * T. samples_per_cycle == 0 skips dense output.
CycleResult advance_cycle(const SwitchedModel& m, const Vector& x_n, const Eigen::Vector2d& u_n,
                          int samples_per_cycle = 0);

Trajectory simulate(const SwitchedModel& m, const Vector& x0, const Eigen::Vector2d& u,
                    int n_cycles, int samples_per_cycle = 64);

struct PeriodClassification {
    enum class Kind { periodic, aperiodic, diverging };
    Kind kind = Kind::aperiodic;
    int period = 0;  // valid when kind == periodic
};

/// Stroboscopic period detection over the trailing window of a trajectory.
/// Returns the smallest m in {1, 2, 4, ...} matching all trailing samples.
PeriodClassification detect_period(const Trajectory& tr, double tol_rel);

}  // namespace accstab
