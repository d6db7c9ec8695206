#include "accstab/converter.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace accstab {

double ConverterParams::omega_s() const { return 2.0 * std::numbers::pi * f_s; }

void ConverterParams::validate() const {
    std::ostringstream problems;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) problems << " " << name << "=" << v;
    };
    positive(f_s, "f_s");
    positive(L, "L");
    positive(C, "C");
    positive(R, "R");
    positive(R_s, "R_s");
    positive(omega_z, "omega_z");
    positive(omega_p, "omega_p");
    if (!(V_h > V_l)) problems << " V_h<=V_l";
    if (!(R_c >= 0.0)) problems << " R_c<0";
    for (double v : {v_s, v_r, K_c, V_l, V_h, R_c}) {
        if (!std::isfinite(v)) problems << " non-finite entry";
    }
    const std::string bad = problems.str();
    if (!bad.empty()) {
        raise(ErrorCategory::domain, "ConverterParams: invalid parameters:" + bad);
    }
}

double RampSignal::value(double t) const {
    const double cycles = t / T;
    const double frac = cycles - std::floor(cycles);
    return V_l + (V_h - V_l) * frac;
}

double ramp_value(const RampSignal& r, double t) { return r.value(t); }

void SwitchedModel::validate() const {
    const Eigen::Index n = A1.rows();
    if (n < 1) raise(ErrorCategory::dimension, "SwitchedModel: empty state");
    auto check = [&](bool ok, const char* what) {
        if (!ok) {
            raise(ErrorCategory::dimension,
                  std::string("SwitchedModel: inconsistent dimensions for ") + what);
        }
    };
    check(A1.cols() == n && A2.rows() == n && A2.cols() == n, "A1/A2");
    check(B1.rows() == n && B1.cols() == 2 && B2.rows() == n && B2.cols() == 2, "B1/B2");
    check(C.cols() == n, "C");
    check(E1.cols() == n && E2.cols() == n, "E1/E2");
    if (!(ramp.T > 0.0) || !(ramp.V_h > ramp.V_l)) {
        raise(ErrorCategory::domain, "SwitchedModel: invalid ramp");
    }
}

SwitchedModel build_buck_model(const ConverterParams& p) {
    p.validate();

    SwitchedModel m;
    const double r_sum = p.R + p.R_c;

    m.A1 = Matrix::Zero(4, 4);
    m.A1(0, 0) = -p.R * p.R_c / (r_sum * p.L);
    m.A1(0, 1) = -p.R / (r_sum * p.L);
    m.A1(1, 0) = p.R / (r_sum * p.C);
    m.A1(1, 1) = -1.0 / (r_sum * p.C);
    m.A1(2, 3) = 1.0;
    m.A1(3, 0) = -p.omega_p * p.R_s;
    m.A1(3, 3) = -p.omega_p;
    m.A2 = m.A1;

    m.B1 = Matrix::Zero(4, 2);
    m.B1(0, 0) = 1.0 / p.L;
    m.B1(3, 1) = p.omega_p;
    m.B2 = m.B1;
    m.B2(0, 0) = 0.0;

    m.C = RowVector::Zero(4);
    m.C(2) = p.K_c;
    m.C(3) = p.K_c / p.omega_z;
    m.D << 0.0, 1.0;

    m.E1 = RowVector::Zero(4);
    m.E1(0) = p.R * p.R_c / r_sum;
    m.E1(1) = p.R / r_sum;
    m.E2 = m.E1;

    m.ramp = RampSignal{p.V_l, p.V_h, p.period()};
    m.state_labels = {"i_L_A", "v_C_V", "v_e1", "v_e2"};
    return m;
}

Complex compensator_response(const ConverterParams& p, Complex s) {
    const Complex denom = s * (1.0 + s / p.omega_p);
    if (denom == Complex(0.0, 0.0)) {
        std::ostringstream os;
        os << "compensator_response: evaluation at a pole, s=(" << s.real() << "," << s.imag()
           << ")";
        raise(ErrorCategory::pole, os.str());
    }
    return p.K_c * (1.0 + s / p.omega_z) / denom;
}

}  // namespace accstab
