#include "accstab/sampled_data.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace accstab {

namespace {

double crossing_denominator(const SwitchedModel& m, const Vector& deriv_minus) {
    const double hdot = m.ramp.slope();
    const double den = (m.C * deriv_minus)(0) - hdot;
    const double scale = std::max(std::abs((m.C * deriv_minus)(0)), std::abs(hdot));
    if (std::abs(den) <= 1e-9 * scale) {
        raise(ErrorCategory::grazing,
              "linearize: comparator grazes the ramp (transversality lost), the "
              "switching-time sensitivity is unbounded");
    }
    return den;
}

void require_period1(const PeriodicOrbit& orbit, const char* who) {
    if (orbit.period_multiple != 1 || orbit.duties.size() != 1) {
        raise(ErrorCategory::domain,
              std::string(who) + ": requires a period-1 orbit (one switching per period)");
    }
}

}  // namespace

Matrix cycle_transition(const SwitchedModel& m, const Vector& switch_state, double duty_time,
                        const Eigen::Vector2d& u) {
    const double T = m.ramp.T;
    const Vector deriv_minus = m.A1 * switch_state + m.B1 * u;
    const Vector deriv_plus = m.A2 * switch_state + m.B2 * u;
    const double den = crossing_denominator(m, deriv_minus);

    const Eigen::Index n = m.dimension();
    const Matrix correction =
        Matrix::Identity(n, n) - ((deriv_minus - deriv_plus) * m.C) / den;
    return expm(m.A2, T - duty_time) * correction * expm(m.A1, duty_time);
}

Linearization linearize(const SwitchedModel& m, const PeriodicOrbit& orbit) {
    m.validate();
    require_period1(orbit, "linearize");

    const double T = m.ramp.T;
    const double d = orbit.duties[0];
    const Eigen::Vector2d u = orbit.input;
    const Vector& x_sw = orbit.switch_state[0];

    const Vector deriv_minus = m.A1 * x_sw + m.B1 * u;
    const Vector deriv_plus = m.A2 * x_sw + m.B2 * u;
    const Vector jump = deriv_minus - deriv_plus;
    const double den = crossing_denominator(m, deriv_minus);

    Linearization lin;
    lin.orbit = orbit;
    lin.phi = cycle_transition(m, x_sw, d, u);

    // Gamma = e^{A2(T-d)} (psi1 B1 - jump/den (C psi1 B1 + D)) + psi2 B2
    const Matrix psi1 = expm_integral(m.A1, d);
    const Matrix psi2 = expm_integral(m.A2, T - d);
    const Matrix psi1_b1 = psi1 * m.B1;                       // N x 2
    const Eigen::RowVector2d row = m.C * psi1_b1 + m.D;       // 1 x 2
    const Matrix gamma =
        expm(m.A2, T - d) * (psi1_b1 - (jump / den) * row) + psi2 * m.B2;
    lin.gamma1 = gamma.col(0);
    lin.gamma2 = gamma.col(1);
    lin.eigs = eigenvalues(lin.phi);
    return lin;
}

Matrix phi_via_matrix_form(const SwitchedModel& m, const PeriodicOrbit& orbit) {
    require_period1(orbit, "phi_via_matrix_form");
    const double T = m.ramp.T;
    const double d = orbit.duties[0];
    const Vector& x_sw = orbit.switch_state[0];
    const Eigen::Vector2d u = orbit.input;

    const Vector numerator = (m.A1 - m.A2) * x_sw + (m.B1 - m.B2) * u;
    const Vector deriv_minus = m.A1 * x_sw + m.B1 * u;
    const double den = crossing_denominator(m, deriv_minus);

    const Eigen::Index n = m.dimension();
    const Matrix correction = Matrix::Identity(n, n) - (numerator * m.C) / den;
    return expm(m.A2, T - d) * correction * expm(m.A1, d);
}

Matrix monodromy(const SwitchedModel& m, const PeriodicOrbit& orbit) {
    m.validate();
    if (orbit.duties.empty() || orbit.switch_state.size() != orbit.duties.size()) {
        raise(ErrorCategory::domain, "monodromy: malformed orbit");
    }
    Matrix product = Matrix::Identity(m.dimension(), m.dimension());
    for (std::size_t i = 0; i < orbit.duties.size(); ++i) {
        product = cycle_transition(m, orbit.switch_state[i], orbit.duties[i], orbit.input) *
                  product;
    }
    return product;
}

const char* to_string(StabilityClass c) noexcept {
    switch (c) {
        case StabilityClass::stable: return "stable";
        case StabilityClass::period_doubling: return "period_doubling";
        case StabilityClass::neimark: return "neimark";
        case StabilityClass::real_unstable: return "real_unstable";
    }
    return "unknown";
}

StabilityVerdict classify_spectrum(const ComplexList& eigs, double tol) {
    if (eigs.empty()) {
        raise(ErrorCategory::domain, "classify_spectrum: empty spectrum");
    }
    StabilityVerdict verdict;
    verdict.tolerance = tol;
    verdict.max_magnitude = spectral_radius(eigs);
    verdict.marginal = std::abs(verdict.max_magnitude - 1.0) <= tol;

    for (const Complex& l : eigs) {
        if (std::abs(l) >= 1.0 - tol) verdict.critical_eigs.push_back(l);
    }

    if (verdict.max_magnitude < 1.0 - tol) {
        verdict.cls = StabilityClass::stable;
        verdict.critical_eigs.clear();
        return verdict;
    }

    // eigenvalues() sorts by magnitude, so the dominant one leads.
    const Complex dominant = verdict.critical_eigs.front();
    if (std::abs(dominant.imag()) > tol * std::max(1.0, std::abs(dominant))) {
        verdict.cls = StabilityClass::neimark;
    } else if (dominant.real() < 0.0) {
        verdict.cls = StabilityClass::period_doubling;
    } else {
        verdict.cls = StabilityClass::real_unstable;
    }
    return verdict;
}

StabilityVerdict classify_stability(const Linearization& lin, double tol) {
    return classify_spectrum(lin.eigs, tol);
}

Complex transfer_response(const Linearization& lin, const SwitchedModel& m, TransferKind which,
                          Complex z) {
    for (const Complex& l : lin.eigs) {
        if (std::abs(z - l) < 1e-9) {
            std::ostringstream os;
            os << "transfer_response: z=(" << z.real() << "," << z.imag()
               << ") is within 1e-9 of an eigenvalue of phi";
            raise(ErrorCategory::pole, os.str());
        }
    }
    const Eigen::Index n = m.dimension();
    using ComplexMatrix = Eigen::MatrixXcd;
    using ComplexVector = Eigen::VectorXcd;

    const ComplexMatrix lhs =
        z * ComplexMatrix::Identity(n, n) - lin.phi.cast<Complex>();
    const Vector& gamma = (which == TransferKind::control_to_output) ? lin.gamma2 : lin.gamma1;
    const ComplexVector w = lhs.partialPivLu().solve(gamma.cast<Complex>());
    return (m.output_row().cast<Complex>() * w)(0);
}

Complex frequency_response(const Linearization& lin, const SwitchedModel& m, TransferKind which,
                           double omega) {
    const double T = m.ramp.T;
    if (!(std::abs(omega) < std::numbers::pi / T)) {
        std::ostringstream os;
        os << "frequency_response: |omega|=" << std::abs(omega)
           << " is outside the valid range |omega| < pi/T = " << std::numbers::pi / T;
        raise(ErrorCategory::range, os.str());
    }
    return transfer_response(lin, m, which, std::exp(Complex(0.0, omega * T)));
}

}  // namespace accstab
