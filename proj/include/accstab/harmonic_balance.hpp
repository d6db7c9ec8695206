#pragma once

#include <optional>
#include <utility>

#include "accstab/converter.hpp"
#include "accstab/numerics.hpp"

namespace accstab {

/// Duty-cycle-to-inductor-current transfer function of the buck power stage,
/// (R C s + 1) / (R L C s^2 + L s + R).
Complex duty_to_current_response(const ConverterParams& p, Complex s);

/// Current-loop gain G(s) = R_s H_c(s) G_1(s).
Complex loop_gain(const ConverterParams& p, Complex s);

/// Critical source voltage from the loop gain at the switching frequency and
/// its first subharmonic: (V_h - V_l) / (2 Re[G(j w_s) - G(j w_s / 2)]).
/// Returns nullopt when the denominator is not positive (no finite
/// period-doubling threshold predicted).
std::optional<double> critical_voltage_exact(const ConverterParams& p);

/// phi(k) = (1 + k^2)(0.25 + k^2) / k, k = omega_p / omega_s. Requires k > 0.
double phi(double k);

/// Minimizer of phi: the positive root of 3 k^4 + 1.25 k^2 - 0.25 = 0,
/// evaluated in closed form (~0.3843).
double phi_minimizer();

/// Simplified critical voltage 2 (V_h - V_l) L omega_z omega_s / (3 R_s K_c) * phi(k).
double critical_voltage_simplified(const ConverterParams& p);

/// Minimum of the simplified critical voltage over the pole ratio k.
double vs_min(const ConverterParams& p);

enum class HbVerdict { unstable_range_exists, pole_insensitive };

const char* to_string(HbVerdict v) noexcept;

struct HbPrediction {
    std::optional<double> vs_star_exact;   // at the configured omega_p
    double vs_star_simplified = 0.0;       // at the configured omega_p
    double vs_min = 0.0;
    double k = 0.0;                        // omega_p / omega_s
    double phi_value = 0.0;
    HbVerdict verdict = HbVerdict::pole_insensitive;
    /// k-interval where the simplified critical voltage drops below v_s;
    /// present exactly when the verdict says an unstable range exists.
    std::optional<std::pair<double, double>> unstable_k_range;
};

/// Period-doubling existence test: an unstable pole range exists iff
/// v_s >= vs_min. The predicted k-interval is the harmonic-balance estimate,
/// not the exact sampled-data boundary.
HbPrediction theorem1_predict(const ConverterParams& p);

}  // namespace accstab
