// Command-line front end: loads a converter config, runs the requested
// analysis, and writes CSV/JSON artifacts into the output directory.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "accstab/averaged_model.hpp"
#include "accstab/harmonic_balance.hpp"
#include "accstab/io.hpp"
#include "accstab/sampled_data.hpp"
#include "accstab/simulator.hpp"
#include "accstab/steady_state.hpp"
#include "accstab/sweep.hpp"
#include "accstab/version.hpp"

namespace {

using namespace accstab;

namespace fs = std::filesystem;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file")->required();
    cmd->add_option("--out", args.out_dir, "Output directory")->required();
}

RunConfig load(const CommonArgs& args) {
    fs::create_directories(args.out_dir);
    return parse_config_file(args.config_path);
}

PeriodicOrbit solve_orbit(const RunConfig& cfg, const SwitchedModel& model, int period_multiple) {
    OrbitSolveOptions opts;
    opts.duty_guess = cfg.duty_guess();
    return find_periodic_orbit(model, Eigen::Vector2d(cfg.converter.v_s, cfg.converter.v_r),
                               period_multiple, opts);
}

Vector perturb_state(const Vector& x, double rel, unsigned seed) {
    if (rel == 0.0) return x;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Vector out = x;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out(i) *= 1.0 + rel * unit(rng);
    }
    return out;
}

int cmd_simulate(const CommonArgs& args) {
    const RunConfig cfg = load(args);
    const SwitchedModel model = build_buck_model(cfg.converter);
    const Eigen::Vector2d u(cfg.converter.v_s, cfg.converter.v_r);

    const PeriodicOrbit orbit = solve_orbit(cfg, model, cfg.orbit.period_multiple);
    const Vector x0 =
        perturb_state(orbit.x_start, cfg.simulate.perturb_rel, cfg.simulate.seed);

    OrderedJson results;
    results["orbit"] = orbit_to_json(model, orbit);
    try {
        const Trajectory tr =
            simulate(model, x0, u, cfg.simulate.n_cycles, cfg.simulate.samples_per_cycle);
        write_trajectory_csv(fs::path(args.out_dir) / "trajectory.csv", model, tr);

        OrderedJson duties = OrderedJson::array();
        for (double d : tr.duties) duties.push_back(d / model.ramp.T);
        results["duty_fractions"] = std::move(duties);
        if (tr.strobe.size() >= 17) {
            const PeriodClassification pc = detect_period(tr, cfg.simulate.detect_tol_rel);
            switch (pc.kind) {
                case PeriodClassification::Kind::periodic:
                    results["classification"] = "period-" + std::to_string(pc.period);
                    break;
                case PeriodClassification::Kind::aperiodic:
                    results["classification"] = "aperiodic";
                    break;
                case PeriodClassification::Kind::diverging:
                    results["classification"] = "diverging";
                    break;
            }
        }
    } catch (const DivergenceError& e) {
        write_trajectory_csv(fs::path(args.out_dir) / "trajectory.csv", model, e.partial);
        results["classification"] = "diverging";
        results["diverged_at_cycle"] = e.cycle_index;
    }
    write_report(fs::path(args.out_dir) / "simulate_report.json", cfg, "simulate", results);
    std::cout << "simulate: wrote trajectory.csv and simulate_report.json ("
              << results.value("classification", "n/a") << ")\n";
    return 0;
}

int cmd_orbit(const CommonArgs& args) {
    const RunConfig cfg = load(args);
    const SwitchedModel model = build_buck_model(cfg.converter);
    const Eigen::Vector2d u(cfg.converter.v_s, cfg.converter.v_r);

    const PeriodicOrbit orbit = solve_orbit(cfg, model, cfg.orbit.period_multiple);
    const Trajectory one_period = simulate(model, orbit.x_start, u, orbit.period_multiple,
                                           cfg.simulate.samples_per_cycle);
    write_trajectory_csv(fs::path(args.out_dir) / "orbit_waveform.csv", model, one_period);
    write_report(fs::path(args.out_dir) / "orbit_report.json", cfg, "orbit",
                 orbit_to_json(model, orbit));
    std::cout << "orbit: mean duty " << format_number(orbit.mean_duty_fraction(model.ramp.T))
              << ", residual " << format_number(orbit.residual) << "\n";
    return 0;
}

int cmd_stability(const CommonArgs& args) {
    const RunConfig cfg = load(args);
    const SwitchedModel model = build_buck_model(cfg.converter);
    const Eigen::Vector2d u(cfg.converter.v_s, cfg.converter.v_r);

    const PeriodicOrbit orbit = solve_orbit(cfg, model, 1);
    const Linearization lin = linearize(model, orbit);
    const StabilityVerdict verdict = classify_stability(lin, cfg.stability_tol);
    const AveragedJacobian avg = averaged_jacobian(model, u);

    OrderedJson results;
    results["orbit"] = orbit_to_json(model, orbit);
    results["linearization"] = linearization_to_json(lin);
    results["verdict"] = verdict_to_json(verdict);
    OrderedJson poles = OrderedJson::array();
    for (const Complex& p : avg.poles) poles.push_back(complex_to_json(p));
    results["averaged_poles"] = std::move(poles);
    results["averaged_max_re"] = max_real_part(avg.poles);
    write_report(fs::path(args.out_dir) / "stability_report.json", cfg, "stability", results);
    std::cout << "stability: " << to_string(verdict.cls) << ", max |eig| "
              << format_number(verdict.max_magnitude) << "\n";
    return 0;
}

int cmd_sweep_pole(const CommonArgs& args) {
    const RunConfig cfg = load(args);
    const SweepReport report = run_sweep(cfg.converter, cfg.sweep);
    write_sweep_csv(fs::path(args.out_dir) / "sweep.csv", report);
    write_report(fs::path(args.out_dir) / "sweep_report.json", cfg, "sweep-pole",
                 sweep_to_json(report));
    std::cout << "sweep-pole: " << report.points.size() << " grid points, "
              << report.boundaries.size() << " boundaries\n";
    for (const BifurcationBoundary& b : report.boundaries) {
        std::cout << "  boundary near omega_p = " << format_number(b.omega_p)
                  << " rad/s (k = " << format_number(b.omega_p / cfg.converter.omega_s())
                  << ")\n";
    }
    return 0;
}

int cmd_hb(const CommonArgs& args) {
    const RunConfig cfg = load(args);
    const HbPrediction pred = theorem1_predict(cfg.converter);
    write_report(fs::path(args.out_dir) / "hb_report.json", cfg, "hb", hb_to_json(pred));
    std::cout << "hb: vs_min " << format_number(pred.vs_min) << " V, verdict "
              << to_string(pred.verdict) << "\n";
    return 0;
}

int cmd_tf(const CommonArgs& args) {
    const RunConfig cfg = load(args);
    const SwitchedModel model = build_buck_model(cfg.converter);

    const PeriodicOrbit orbit = solve_orbit(cfg, model, 1);
    const Linearization lin = linearize(model, orbit);

    const double ws = cfg.converter.omega_s();
    const double w_lo = cfg.tf.omega_min_over_omega_s * ws;
    const double w_hi = cfg.tf.omega_max_over_omega_s * ws;
    const int n = cfg.tf.points;

    const fs::path csv_path = fs::path(args.out_dir) / "tf.csv";
    std::ofstream out(csv_path);
    if (!out) raise(ErrorCategory::io, "cannot open for writing: " + csv_path.string());
    out << "omega_rad_s,control_to_output_re,control_to_output_im,audio_re,audio_im\n";
    for (int i = 0; i < n; ++i) {
        const double w =
            w_lo * std::pow(w_hi / w_lo, static_cast<double>(i) / static_cast<double>(n - 1));
        const Complex toc = frequency_response(lin, model, TransferKind::control_to_output, w);
        const Complex tos = frequency_response(lin, model, TransferKind::audio, w);
        out << format_number(w) << "," << format_number(toc.real()) << ","
            << format_number(toc.imag()) << "," << format_number(tos.real()) << ","
            << format_number(tos.imag()) << "\n";
    }
    if (!out) raise(ErrorCategory::io, "write failure: " + csv_path.string());

    OrderedJson results;
    results["linearization"] = linearization_to_json(lin);
    results["dc"] = {{"control_to_output",
                      complex_to_json(transfer_response(lin, model,
                                                        TransferKind::control_to_output, 1.0))},
                     {"audio",
                      complex_to_json(transfer_response(lin, model, TransferKind::audio, 1.0))}};
    write_report(fs::path(args.out_dir) / "tf_report.json", cfg, "tf", results);
    std::cout << "tf: wrote tf.csv over [" << format_number(w_lo) << ", " << format_number(w_hi)
              << "] rad/s\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Switched-model analysis of PWM DC-DC converters under average "
                 "current control: exact simulation, periodic orbits, sampled-data "
                 "stability, and harmonic-balance design thresholds."};
    app.set_version_flag("--version", std::string(accstab::kToolVersion));
    app.require_subcommand(1);

    CommonArgs args;
    int (*handler)(const CommonArgs&) = nullptr;

    auto wire = [&](const char* name, const char* desc, int (*fn)(const CommonArgs&)) {
        CLI::App* cmd = app.add_subcommand(name, desc);
        add_common(cmd, args);
        cmd->callback([&handler, fn] { handler = fn; });
    };
    wire("simulate", "Cycle-by-cycle simulation from the periodic orbit", cmd_simulate);
    wire("orbit", "Solve the periodic steady-state orbit", cmd_orbit);
    wire("stability", "Sampled-data linearization and orbital stability", cmd_stability);
    wire("sweep-pole", "Sweep the compensator pole and refine stability boundaries",
         cmd_sweep_pole);
    wire("hb", "Harmonic-balance period-doubling thresholds", cmd_hb);
    wire("tf", "Control-to-output and audio-susceptibility frequency responses", cmd_tf);

    CLI11_PARSE(app, argc, argv);

    try {
        return handler ? handler(args) : 1;
    } catch (const accstab::Error& e) {
        std::cerr << "accstab: error [" << accstab::to_string(e.category()) << "]: " << e.what()
                  << "\n";
        return accstab::exit_code(e.category());
    } catch (const std::exception& e) {
        std::cerr << "accstab: error: " << e.what() << "\n";
        return 1;
    }
}
