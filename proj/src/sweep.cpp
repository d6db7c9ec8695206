#include "accstab/sweep.hpp"

#include <future>

#include "accstab/averaged_model.hpp"
#include "accstab/steady_state.hpp"

namespace accstab {

void SweepOptions::validate() const {
    if (!(k_min > 0.0) || !(k_max > k_min)) {
        raise(ErrorCategory::config, "sweep: need 0 < k_min < k_max");
    }
    if (grid_count < 2) {
        raise(ErrorCategory::config, "sweep: grid_count must be >= 2");
    }
    if (!(boundary_tol_frac > 0.0) || !(stability_tol > 0.0)) {
        raise(ErrorCategory::config, "sweep: tolerances must be positive");
    }
}

SweepPoint evaluate_pole(const ConverterParams& base, double omega_p, double duty_guess,
                         double stability_tol) {
    SweepPoint pt;
    pt.omega_p = omega_p;
    pt.k = omega_p / base.omega_s();
    try {
        ConverterParams p = base;
        p.omega_p = omega_p;
        const SwitchedModel model = build_buck_model(p);
        const Eigen::Vector2d u(p.v_s, p.v_r);

        OrbitSolveOptions orbit_opts;
        orbit_opts.duty_guess = duty_guess;
        const PeriodicOrbit orbit = find_periodic_orbit(model, u, 1, orbit_opts);
        const Linearization lin = linearize(model, orbit);
        const StabilityVerdict verdict = classify_stability(lin, stability_tol);

        pt.duty_fraction = orbit.duties[0] / model.ramp.T;
        pt.eigs = lin.eigs;
        pt.max_magnitude = verdict.max_magnitude;
        pt.verdict = verdict.cls;
        pt.marginal = verdict.marginal;
        pt.averaged_max_re = max_real_part(averaged_jacobian(model, u).poles);
        pt.solved = true;
    } catch (const Error& e) {
        pt.solved = false;
        pt.error = e.what();
    }
    return pt;
}

namespace {

bool is_unstable(const SweepPoint& pt) { return pt.verdict != StabilityClass::stable; }

BifurcationBoundary refine_boundary(const ConverterParams& base, const SweepOptions& opts,
                                    SweepPoint lo, SweepPoint hi) {
    const double width_target = opts.boundary_tol_frac * base.omega_s();
    while (hi.omega_p - lo.omega_p > width_target) {
        const double mid = 0.5 * (lo.omega_p + hi.omega_p);
        SweepPoint pt = evaluate_pole(base, mid, opts.duty_guess, opts.stability_tol);
        if (!pt.solved) break;  // keep the bracket we have
        if (is_unstable(pt) == is_unstable(lo)) {
            lo = std::move(pt);
        } else {
            hi = std::move(pt);
        }
    }

    BifurcationBoundary b;
    b.omega_lo = lo.omega_p;
    b.omega_hi = hi.omega_p;
    b.omega_p = 0.5 * (lo.omega_p + hi.omega_p);
    b.verdict_lo = lo.verdict;
    b.verdict_hi = hi.verdict;
    const SweepPoint mid = evaluate_pole(base, b.omega_p, opts.duty_guess, opts.stability_tol);
    b.dominant = (mid.solved && !mid.eigs.empty())
                     ? mid.eigs.front()
                     : (is_unstable(hi) ? hi.eigs.front() : lo.eigs.front());
    return b;
}

}  // namespace

SweepReport run_sweep(const ConverterParams& base, const SweepOptions& opts) {
    base.validate();
    opts.validate();

    SweepReport report;
    report.options = opts;

    const double ws = base.omega_s();
    std::vector<double> omegas(static_cast<std::size_t>(opts.grid_count));
    for (int i = 0; i < opts.grid_count; ++i) {
        const double k =
            opts.k_min + (opts.k_max - opts.k_min) * static_cast<double>(i) /
                             static_cast<double>(opts.grid_count - 1);
        omegas[static_cast<std::size_t>(i)] = k * ws;
    }

    report.points.resize(omegas.size());
    if (opts.parallel) {
        std::vector<std::future<SweepPoint>> futures;
        futures.reserve(omegas.size());
        for (double w : omegas) {
            futures.push_back(std::async(std::launch::async, [&base, &opts, w] {
                return evaluate_pole(base, w, opts.duty_guess, opts.stability_tol);
            }));
        }
        for (std::size_t i = 0; i < futures.size(); ++i) {
            report.points[i] = futures[i].get();  // merged by index: deterministic
        }
    } else {
        for (std::size_t i = 0; i < omegas.size(); ++i) {
            report.points[i] = evaluate_pole(base, omegas[i], opts.duty_guess,
                                             opts.stability_tol);
        }
    }

    bool any_solved = false;
    for (const SweepPoint& pt : report.points) any_solved |= pt.solved;
    if (!any_solved) {
        raise(ErrorCategory::sweep, "run_sweep: every grid point failed to solve");
    }

    for (std::size_t i = 0; i + 1 < report.points.size(); ++i) {
        const SweepPoint& a = report.points[i];
        const SweepPoint& b = report.points[i + 1];
        if (a.solved && b.solved && is_unstable(a) != is_unstable(b)) {
            report.boundaries.push_back(refine_boundary(base, opts, a, b));
        }
    }
    return report;
}

}  // namespace accstab
