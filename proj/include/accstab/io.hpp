#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "accstab/converter.hpp"
#include "accstab/harmonic_balance.hpp"
#include "accstab/sampled_data.hpp"
#include "accstab/simulator.hpp"
#include "accstab/steady_state.hpp"
#include "accstab/sweep.hpp"

namespace accstab {

using OrderedJson = nlohmann::ordered_json;

struct SimulateConfig {
    int n_cycles = 200;
    int samples_per_cycle = 64;
    double perturb_rel = 0.0;  // relative start perturbation, fraction of state scale
    unsigned seed = 1;
    double detect_tol_rel = 1e-3;
};

struct OrbitConfig {
    int period_multiple = 1;
};

struct TfConfig {
    int points = 200;
    double omega_min_over_omega_s = 1e-3;
    double omega_max_over_omega_s = 0.499;  // the response is valid below omega_s / 2
};

struct RunConfig {
    ConverterParams converter;
    bool omega_p_relative = false;   // which form the config used, kept for the echo
    std::optional<double> v_set;     // set-point output voltage, duty-guess aid only
    SimulateConfig simulate;
    OrbitConfig orbit;
    SweepOptions sweep;
    TfConfig tf;
    double stability_tol = 1e-6;

    double duty_guess() const {
        return v_set ? *v_set / converter.v_s : 0.5;
    }
};

RunConfig parse_config(const OrderedJson& j);
RunConfig parse_config_file(const std::filesystem::path& path);

/// Normalized echo of a config; parse_config(config_to_json(c)) == c.
OrderedJson config_to_json(const RunConfig& cfg);

bool operator==(const ConverterParams& a, const ConverterParams& b);
bool operator==(const RunConfig& a, const RunConfig& b);

/// Decimal formatting with 15 significant digits.
std::string format_number(double v);

void write_trajectory_csv(const std::filesystem::path& path, const SwitchedModel& model,
                          const Trajectory& tr);
void write_sweep_csv(const std::filesystem::path& path, const SweepReport& report);

OrderedJson complex_to_json(const Complex& z);
OrderedJson orbit_to_json(const SwitchedModel& model, const PeriodicOrbit& orbit);
OrderedJson verdict_to_json(const StabilityVerdict& verdict);
OrderedJson linearization_to_json(const Linearization& lin);
OrderedJson sweep_to_json(const SweepReport& report);
OrderedJson hb_to_json(const HbPrediction& pred);

/// Wraps a result body with the tool stamp and the config echo and writes it.
void write_report(const std::filesystem::path& path, const RunConfig& cfg,
                  const std::string& command, const OrderedJson& results);

}  // namespace accstab
