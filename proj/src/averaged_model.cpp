#include "accstab/averaged_model.hpp"

namespace accstab {

AveragedJacobian averaged_jacobian(const SwitchedModel& m, const Eigen::Vector2d& u) {
    m.validate();
    if (m.A1 != m.A2) {
        raise(ErrorCategory::unsupported_topology,
              "averaged_jacobian: the averaged linearization used here assumes A1 == A2 "
              "(buck-type models)");
    }
    AveragedJacobian out;
    const Vector forcing = (m.B1 - m.B2) * u;  // rank-one column
    out.a_avg = m.A1 + (forcing * m.C) / (m.ramp.V_h - m.ramp.V_l);
    out.poles = eigenvalues(out.a_avg);
    return out;
}

}  // namespace accstab
