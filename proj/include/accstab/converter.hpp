#pragma once

#include <string>
#include <vector>

#include "accstab/numerics.hpp"

namespace accstab {

/// Circuit, compensator, ramp and clock parameters of one average-current-
/// controlled buck converter, strict SI units throughout.
struct ConverterParams {
    double v_s = 0.0;      ///< source voltage [V]
    double v_r = 0.0;      ///< current reference [V]
    double f_s = 0.0;      ///< switching frequency [Hz]
    double L = 0.0;        ///< inductance [H]
    double C = 0.0;        ///< output capacitance [F]
    double R_c = 0.0;      ///< capacitor ESR [ohm]
    double R = 0.0;        ///< load resistance [ohm]
    double R_s = 0.0;      ///< current-sense resistance [ohm]
    double V_l = 0.0;      ///< ramp low level [V]
    double V_h = 0.0;      ///< ramp high level [V]
    double K_c = 0.0;      ///< compensator gain
    double omega_z = 0.0;  ///< compensator zero [rad/s]
    double omega_p = 0.0;  ///< compensator pole [rad/s]

    double period() const { return 1.0 / f_s; }
    double omega_s() const;

    /// Throws a domain error when any invariant is violated.
    void validate() const;
};

/// T-periodic sawtooth: h(0) = V_l, h(T-) = V_h, instantaneous reset at
/// multiples of T (the value at t = nT is V_l, never V_h).
struct RampSignal {
    double V_l = 0.0;
    double V_h = 0.0;
    double T = 0.0;

    double value(double t) const;
    /// Linear form over one cycle without wrapping: V_l + slope * t for
    /// t in [0, T]. Used when locating a crossing inside a known cycle.
    double value_in_cycle(double t) const { return V_l + slope() * t; }
    double slope() const { return (V_h - V_l) / T; }
};

/// The switched state-space model: two affine stages
///   S1: xdot = A1 x + B1 u,   S2: xdot = A2 x + B2 u,  u = (v_s, v_r)'
/// comparator input y = C x + D u, output voltage v_o = E_i x per stage.
struct SwitchedModel {
    Matrix A1, A2;           // N x N
    Matrix B1, B2;           // N x 2
    RowVector C;             // 1 x N
    Eigen::RowVector2d D;    // 1 x 2
    RowVector E1, E2;        // 1 x N
    RampSignal ramp;
    std::vector<std::string> state_labels;

    Eigen::Index dimension() const { return A1.rows(); }
    void validate() const;

    double output(const Vector& x, const Eigen::Vector2d& u) const {
        return (C * x)(0) + (D * u)(0);
    }
    /// (E1 + E2)/2, the output row used by the transfer functions.
    RowVector output_row() const { return 0.5 * (E1 + E2); }
    double output_voltage(const Vector& x) const { return (output_row() * x)(0); }
};

/// Builds the fourth-order buck model with state (i_L, v_C, v_e1, v_e2).
/// The compensator realization: v_e1 integrates v_e2, and v_e2 low-passes
/// the current error omega_p (v_r - R_s i_L - v_e2).
SwitchedModel build_buck_model(const ConverterParams& p);

double ramp_value(const RampSignal& r, double t);

/// Compensator transfer function H_c(s) = K_c (1 + s/omega_z) / (s (1 + s/omega_p)).
Complex compensator_response(const ConverterParams& p, Complex s);

}  // namespace accstab
