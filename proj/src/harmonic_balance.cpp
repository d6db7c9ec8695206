#include "accstab/harmonic_balance.hpp"

#include <cmath>

namespace accstab {

Complex duty_to_current_response(const ConverterParams& p, Complex s) {
    const Complex num = p.R * p.C * s + 1.0;
    const Complex den = p.R * p.L * p.C * s * s + p.L * s + p.R;
    if (den == Complex(0.0, 0.0)) {
        raise(ErrorCategory::pole, "duty_to_current_response: evaluation at a pole");
    }
    return num / den;
}

Complex loop_gain(const ConverterParams& p, Complex s) {
    return p.R_s * compensator_response(p, s) * duty_to_current_response(p, s);
}

std::optional<double> critical_voltage_exact(const ConverterParams& p) {
    p.validate();
    const double ws = p.omega_s();
    const Complex g_ws = loop_gain(p, Complex(0.0, ws));
    const Complex g_half = loop_gain(p, Complex(0.0, 0.5 * ws));
    const double den = 2.0 * (g_ws - g_half).real();
    if (!(den > 0.0)) return std::nullopt;
    return (p.V_h - p.V_l) / den;
}

double phi(double k) {
    if (!(k > 0.0)) {
        raise(ErrorCategory::domain, "phi: requires k > 0");
    }
    return (1.0 + k * k) * (0.25 + k * k) / k;
}

double phi_minimizer() {
    // d/dk [0.25/k + 1.25 k + k^3] = 0  =>  3 k^4 + 1.25 k^2 - 0.25 = 0,
    // a quadratic in k^2 with one positive root.
    const double k_sq = (-1.25 + std::sqrt(1.25 * 1.25 + 3.0)) / 6.0;
    return std::sqrt(k_sq);
}

namespace {

double simplified_coefficient(const ConverterParams& p) {
    return 2.0 * (p.V_h - p.V_l) * p.L * p.omega_z * p.omega_s() / (3.0 * p.R_s * p.K_c);
}

}  // namespace

double critical_voltage_simplified(const ConverterParams& p) {
    p.validate();
    return simplified_coefficient(p) * phi(p.omega_p / p.omega_s());
}

double vs_min(const ConverterParams& p) {
    p.validate();
    return simplified_coefficient(p) * phi(phi_minimizer());
}

const char* to_string(HbVerdict v) noexcept {
    return v == HbVerdict::unstable_range_exists ? "unstable_range_exists" : "pole_insensitive";
}

HbPrediction theorem1_predict(const ConverterParams& p) {
    p.validate();

    HbPrediction pred;
    pred.k = p.omega_p / p.omega_s();
    pred.phi_value = phi(pred.k);
    pred.vs_star_exact = critical_voltage_exact(p);
    pred.vs_star_simplified = critical_voltage_simplified(p);
    pred.vs_min = vs_min(p);

    if (p.v_s < pred.vs_min) {
        pred.verdict = HbVerdict::pole_insensitive;
        return pred;
    }
    pred.verdict = HbVerdict::unstable_range_exists;

    // Solve phi(k) = v_s / coefficient on both sides of the minimizer.
    const double coeff = simplified_coefficient(p);
    const double target = p.v_s / coeff;
    const double k_star = phi_minimizer();
    const auto excess = [&](double k) { return phi(k) - target; };

    if (excess(k_star) >= 0.0) {
        // v_s == vs_min up to rounding: the range degenerates to the minimizer.
        pred.unstable_k_range = {k_star, k_star};
        return pred;
    }
    double lo = k_star;
    while (excess(lo) < 0.0) lo *= 0.5;
    double hi = k_star;
    while (excess(hi) < 0.0) hi *= 2.0;

    const double k_lo = find_root_scalar(excess, lo, 2.0 * lo, 1e-12);
    const double k_hi = find_root_scalar(excess, 0.5 * hi, hi, 1e-12);
    pred.unstable_k_range = {k_lo, k_hi};
    return pred;
}

}  // namespace accstab
