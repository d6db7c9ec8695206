#pragma once

#include "accstab/converter.hpp"
#include "accstab/numerics.hpp"

namespace accstab {

/// Linearized state-space averaged dynamics around the nominal duty cycle.
/// Only the system matrix and its poles are modeled; the averaged model is
/// used here purely as a pole-location baseline, no input matrix is built.
struct AveragedJacobian {
    Matrix a_avg;
    ComplexList poles;
};

/// a_avg = A1 + (B1 - B2) u C / (V_h - V_l). Valid for buck-type models with
/// A1 == A2; other topologies are refused.
AveragedJacobian averaged_jacobian(const SwitchedModel& m, const Eigen::Vector2d& u);

}  // namespace accstab
