#pragma once

#include "accstab/converter.hpp"
#include "accstab/steady_state.hpp"

namespace fixtures {

inline accstab::OrbitSolveOptions duty_guess(double fraction) {
    accstab::OrbitSolveOptions opts;
    opts.duty_guess = fraction;
    return opts;
}

/// 14 V / 50 kHz ACC buck used as the main regression benchmark.
/// k_pole is the compensator pole as a fraction of omega_s.
inline accstab::ConverterParams buck_14v(double k_pole) {
    accstab::ConverterParams p;
    p.v_s = 14.0;
    p.v_r = 0.5;
    p.f_s = 50e3;
    p.L = 46.1e-6;
    p.C = 380e-6;
    p.R_c = 0.02;
    p.R = 1.0;
    p.R_s = 0.1;
    p.V_l = 0.0;
    p.V_h = 1.0;
    p.K_c = 75506.0;
    p.omega_z = 5652.9;
    p.omega_p = k_pole * p.omega_s();
    return p;
}

inline constexpr double kBuck14vSetPoint = 5.0;  // nominal output voltage [V]

/// 5 V / 180 kHz ACC buck; its low-pole configuration exhibits a Neimark
/// instability rather than period doubling.
inline accstab::ConverterParams buck_5v(double omega_p_rad_s = 5655.0) {
    accstab::ConverterParams p;
    p.v_s = 5.0;
    p.v_r = 0.279;
    p.f_s = 180e3;
    p.L = 13e-6;
    p.C = 750e-6;
    p.R_c = 0.005;
    p.R = 0.43;
    p.R_s = 0.06;
    p.V_l = 0.0;
    p.V_h = 2.7;
    p.K_c = 98000.0;
    p.omega_z = 6723.0;
    p.omega_p = omega_p_rad_s;
    return p;
}

inline constexpr double kBuck5vSetPoint = 2.0;  // nominal output voltage [V]

}  // namespace fixtures
