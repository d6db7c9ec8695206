#pragma once

#include <optional>
#include <vector>

#include "accstab/converter.hpp"
#include "accstab/numerics.hpp"

namespace accstab {

/// A solved m*T-periodic orbit of the cycle map.
struct PeriodicOrbit {
    int period_multiple = 1;
    Vector x_start;                    // fixed point x(0)
    std::vector<double> duties;        // switching durations d_i, seconds
    Eigen::Vector2d input;             // (v_s, v_r) held over the orbit
    double residual = 0.0;             // scaled residual norm at convergence

    std::vector<Vector> cycle_start;   // x(i T), i = 0..m-1
    std::vector<Vector> switch_state;  // x(i T + d_i)
    std::vector<Vector> deriv_minus;   // xdot just before each switching
    std::vector<Vector> deriv_plus;    // xdot just after each switching

    double mean_duty_fraction(double T) const {
        double s = 0.0;
        for (double d : duties) s += d;
        return s / (T * static_cast<double>(duties.size()));
    }
};

struct OrbitInit {
    Vector x_start;
    std::vector<double> duties;  // seconds, one per cycle
};

struct OrbitSolveOptions {
    int max_iterations = 50;
    double tolerance = 1e-10;    // on the scaled residual norm
    double duty_guess = 0.5;     // duty fraction used to seed the solve
    std::optional<OrbitInit> init;
};

/// Equilibrium of the duty-averaged dynamics, minimum-norm least-squares
/// (the compensator integrator leaves the averaged matrix rank-deficient).
/// Used to initialize the shooting solver.
Vector averaged_equilibrium(const SwitchedModel& m, const Eigen::Vector2d& u,
                            double duty_fraction);

/// Newton shooting for the m*T-periodic orbit: unknowns (x_start, d_1..d_m),
/// residuals = state periodicity plus the ramp-crossing condition at each
/// switching instant. Converges to unstable orbits as readily as stable ones.
/// period_multiple must be 1 or 2.
PeriodicOrbit find_periodic_orbit(const SwitchedModel& m, const Eigen::Vector2d& u,
                                  int period_multiple, const OrbitSolveOptions& opts = {});

struct SwitchDerivatives {
    Vector minus;  // A1 x(d) + B1 u
    Vector plus;   // A2 x(d) + B2 u
};

/// One-sided state derivatives at each switching instant of a solved orbit.
std::vector<SwitchDerivatives> orbit_derivatives(const SwitchedModel& m,
                                                 const PeriodicOrbit& orbit);

/// Cycle-averaged output voltage (1/mT) int_0^{mT} E x(t) dt, evaluated in
/// closed form through the stage-wise exponential integrals.
double cycle_averaged_output(const SwitchedModel& m, const PeriodicOrbit& orbit);

}  // namespace accstab
