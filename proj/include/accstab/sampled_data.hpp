#pragma once

#include "accstab/converter.hpp"
#include "accstab/numerics.hpp"
#include "accstab/steady_state.hpp"

namespace accstab {

/// Linearized sampled-data dynamics around a T-periodic orbit:
///   x^_{n+1} = phi x^_n + gamma1 v^_sn + gamma2 v^_rn
struct Linearization {
    Matrix phi;
    Vector gamma1, gamma2;
    PeriodicOrbit orbit;
    ComplexList eigs;  // spectrum of phi
};

/// One-cycle state transition Jacobian for a cycle that switches at duty_time
/// with state switch_state: e^{A2 (T-d)} (I - jump C / (C xdot- - hdot)) e^{A1 d}.
/// The rank-one correction carries the switching-instant sensitivity.
Matrix cycle_transition(const SwitchedModel& m, const Vector& switch_state, double duty_time,
                        const Eigen::Vector2d& u);

/// Exact linearization of the cycle map at a period-1 orbit (phi and both
/// input columns). Throws a grazing error when the crossing is tangential.
Linearization linearize(const SwitchedModel& m, const PeriodicOrbit& orbit);

/// Same phi through the (A1 - A2) x + (B1 - B2) u form of the correction
/// numerator rather than the derivative jump; kept as a cross-check.
Matrix phi_via_matrix_form(const SwitchedModel& m, const PeriodicOrbit& orbit);

/// Monodromy over the orbit's full period: the ordered product of per-cycle
/// transition Jacobians (period-2 orbits compose two one-cycle factors).
Matrix monodromy(const SwitchedModel& m, const PeriodicOrbit& orbit);

enum class StabilityClass { stable, period_doubling, neimark, real_unstable };

const char* to_string(StabilityClass c) noexcept;

struct StabilityVerdict {
    StabilityClass cls = StabilityClass::stable;
    double max_magnitude = 0.0;
    ComplexList critical_eigs;  // all eigenvalues with |l| >= 1 - tolerance
    double tolerance = 0.0;
    bool marginal = false;      // max magnitude within tolerance of the unit circle
};

StabilityVerdict classify_spectrum(const ComplexList& eigs, double tol = 1e-6);
StabilityVerdict classify_stability(const Linearization& lin, double tol = 1e-6);

enum class TransferKind { control_to_output, audio };

/// T_oc(z) = E (zI - phi)^{-1} gamma2 or T_os(z) = E (zI - phi)^{-1} gamma1,
/// with E = (E1 + E2)/2.
Complex transfer_response(const Linearization& lin, const SwitchedModel& m, TransferKind which,
                          Complex z);

/// Frequency response T(e^{j w T}); refuses |w| >= pi/T.
Complex frequency_response(const Linearization& lin, const SwitchedModel& m, TransferKind which,
                           double omega);

}  // namespace accstab
