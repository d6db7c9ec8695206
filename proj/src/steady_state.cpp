#include "accstab/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "accstab/simulator.hpp"

namespace accstab {

namespace {

struct ShootingProblem {
    const SwitchedModel& model;
    Eigen::Vector2d u;
    int cycles;        // period multiple m
    double state_scale;

    Eigen::Index n_states() const { return model.dimension(); }
    Eigen::Index n_unknowns() const { return n_states() + cycles; }

    // z = [x_start; d_1..d_m]. Propagates the candidate orbit exactly and
    // returns the scaled residual: periodicity defect over m cycles plus the
    // ramp-crossing condition at each candidate switching instant.
    Vector residual(const Vector& z) const {
        const Eigen::Index n = n_states();
        const double T = model.ramp.T;
        const double amp = model.ramp.V_h - model.ramp.V_l;

        Vector r(n_unknowns());
        Vector x = z.head(n);
        for (int i = 0; i < cycles; ++i) {
            const double d = z(n + i);
            const Vector x_sw = propagate_stage(model.A1, model.B1, u, x, d);
            r(n + i) = (model.output(x_sw, u) - model.ramp.value_in_cycle(d)) / amp;
            x = propagate_stage(model.A2, model.B2, u, x_sw, T - d);
        }
        r.head(n) = (x - z.head(n)) / state_scale;
        return r;
    }

    void clamp_duties(Vector& z) const {
        const Eigen::Index n = n_states();
        const double T = model.ramp.T;
        for (int i = 0; i < cycles; ++i) {
            z(n + i) = std::clamp(z(n + i), 0.0, T);
        }
    }
};

Vector solve_newton(const ShootingProblem& prob, Vector z, const OrbitSolveOptions& opts,
                    double* residual_out) {
    const Eigen::Index n = prob.n_states();
    const Eigen::Index nu = prob.n_unknowns();
    const double T = prob.model.ramp.T;

    prob.clamp_duties(z);
    Vector r = prob.residual(z);
    double rnorm = r.lpNorm<Eigen::Infinity>();

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        if (rnorm <= opts.tolerance) break;

        // Forward-difference Jacobian, steps scaled per unknown.
        Matrix jac(nu, nu);
        for (Eigen::Index j = 0; j < nu; ++j) {
            const double scale = (j < n) ? prob.state_scale : T;
            double h = 1e-6 * std::max(std::abs(z(j)), scale);
            if (j >= n && z(j) + h > T) h = -h;  // keep candidate duties inside [0, T]
            Vector z_step = z;
            z_step(j) += h;
            jac.col(j) = (prob.residual(z_step) - r) / h;
        }

        const Vector delta = jac.colPivHouseholderQr().solve(-r);
        if (!delta.allFinite()) {
            raise(ErrorCategory::convergence,
                  "find_periodic_orbit: singular shooting Jacobian");
        }

        // Damped step: halve until the residual improves.
        bool accepted = false;
        double lambda = 1.0;
        for (int k = 0; k <= 8; ++k) {
            Vector z_try = z + lambda * delta;
            prob.clamp_duties(z_try);
            const Vector r_try = prob.residual(z_try);
            const double rnorm_try = r_try.lpNorm<Eigen::Infinity>();
            if (rnorm_try < rnorm) {
                z = std::move(z_try);
                r = r_try;
                rnorm = rnorm_try;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            std::ostringstream os;
            os << "find_periodic_orbit: Newton stalled at residual " << rnorm;
            raise(ErrorCategory::convergence, os.str());
        }
    }

    if (rnorm > opts.tolerance) {
        std::ostringstream os;
        os << "find_periodic_orbit: no convergence in " << opts.max_iterations
           << " iterations, residual " << rnorm;
        raise(ErrorCategory::convergence, os.str());
    }
    *residual_out = rnorm;
    return z;
}

PeriodicOrbit assemble_orbit(const SwitchedModel& m, const Eigen::Vector2d& u, int cycles,
                             const Vector& z, double residual) {
    const Eigen::Index n = m.dimension();
    const double T = m.ramp.T;

    PeriodicOrbit orbit;
    orbit.period_multiple = cycles;
    orbit.x_start = z.head(n);
    orbit.input = u;
    orbit.residual = residual;

    Vector x = orbit.x_start;
    for (int i = 0; i < cycles; ++i) {
        const double d = z(n + i);
        if (!(d > 0.0 && d < T)) {
            std::ostringstream os;
            os << "find_periodic_orbit: converged duty " << d / T
               << " * T is saturated; the orbit has no interior switching";
            raise(ErrorCategory::saturation, os.str());
        }
        orbit.duties.push_back(d);
        orbit.cycle_start.push_back(x);
        const Vector x_sw = propagate_stage(m.A1, m.B1, u, x, d);
        orbit.switch_state.push_back(x_sw);
        x = propagate_stage(m.A2, m.B2, u, x_sw, T - d);
    }
    for (const auto& sd : orbit_derivatives(m, orbit)) {
        orbit.deriv_minus.push_back(sd.minus);
        orbit.deriv_plus.push_back(sd.plus);
    }
    return orbit;
}

}  // namespace

Vector averaged_equilibrium(const SwitchedModel& m, const Eigen::Vector2d& u,
                            double duty_fraction) {
    m.validate();
    const Matrix a_avg = duty_fraction * m.A1 + (1.0 - duty_fraction) * m.A2;
    const Vector b = (duty_fraction * m.B1 + (1.0 - duty_fraction) * m.B2) * u;

    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a_avg);
    if (cod.rank() < m.dimension() - 1) {
        std::cerr << "averaged_equilibrium: matrix rank " << cod.rank() << " of "
                  << m.dimension() << "; solution is a minimum-norm compromise\n";
    }
    return cod.solve(-b);
}

namespace {

// Fixed point of the multi-cycle map for FROZEN duties: the map is affine in
// the state, so the start state solves a single linear system. Used to seed
// the shooting Newton with consistent states for a candidate duty pattern.
Vector frozen_duty_fixed_point(const SwitchedModel& m, const Eigen::Vector2d& u,
                               const std::vector<double>& duties) {
    const Eigen::Index n = m.dimension();
    const double T = m.ramp.T;
    Matrix map = Matrix::Identity(n, n);
    Vector offset = Vector::Zero(n);
    for (double d : duties) {
        const Matrix e1 = expm(m.A1, d);
        const Matrix e2 = expm(m.A2, T - d);
        const Matrix cycle = e2 * e1;
        const Vector shift =
            e2 * (expm_integral(m.A1, d) * (m.B1 * u)) + expm_integral(m.A2, T - d) * (m.B2 * u);
        offset = cycle * offset + shift;
        map = cycle * map;
    }
    return (Matrix::Identity(n, n) - map).partialPivLu().solve(offset);
}

}  // namespace

PeriodicOrbit find_periodic_orbit(const SwitchedModel& m, const Eigen::Vector2d& u,
                                  int period_multiple, const OrbitSolveOptions& opts) {
    m.validate();
    if (period_multiple != 1 && period_multiple != 2) {
        raise(ErrorCategory::domain, "find_periodic_orbit: period_multiple must be 1 or 2");
    }

    const Eigen::Index n = m.dimension();
    const double T = m.ramp.T;
    ShootingProblem prob{m, u, period_multiple,
                         std::max({std::abs(u(0)), std::abs(u(1)),
                                   m.ramp.V_h - m.ramp.V_l, 1.0})};

    double residual = 0.0;
    Vector z(prob.n_unknowns());

    if (opts.init) {
        if (opts.init->x_start.size() != n ||
            opts.init->duties.size() != static_cast<std::size_t>(period_multiple)) {
            raise(ErrorCategory::dimension, "find_periodic_orbit: init size mismatch");
        }
        z.head(n) = opts.init->x_start;
        for (int i = 0; i < period_multiple; ++i) z(n + i) = opts.init->duties[i];
        z = solve_newton(prob, z, opts, &residual);
        return assemble_orbit(m, u, period_multiple, z, residual);
    }

    z.head(n) = averaged_equilibrium(m, u, opts.duty_guess);
    const double d_guess = opts.duty_guess * T;
    for (int i = 0; i < period_multiple; ++i) z(n + i) = d_guess;
    if (period_multiple == 2) {
        // De-symmetrize so Newton is not captured by the period-1 solution.
        z(n + 0) = std::min(d_guess * 1.05, T);
        z(n + 1) = d_guess * 0.95;
    }
    z = solve_newton(prob, z, opts, &residual);

    const auto is_symmetric = [&](const Vector& v) {
        return std::abs(v(n) - v(n + 1)) <= 1e-6 * T;
    };
    if (period_multiple == 2 && is_symmetric(z)) {
        // The small split collapsed onto the embedded period-1 solution.
        // Retry over wider duty splits, each seeded with the exact fixed
        // point of the frozen-duty two-cycle map.
        const double d_base = z(n);
        for (double split : {0.15, 0.30, 0.50, 0.70}) {
            const double hi = std::min(d_base * (1.0 + split), 0.98 * T);
            const double lo = std::max(d_base * (1.0 - split), 0.02 * T);
            Vector trial(prob.n_unknowns());
            trial(n + 0) = hi;
            trial(n + 1) = lo;
            trial.head(n) = frozen_duty_fixed_point(m, u, {hi, lo});
            try {
                double retry_residual = 0.0;
                const Vector z_retry = solve_newton(prob, trial, opts, &retry_residual);
                if (!is_symmetric(z_retry)) {
                    z = z_retry;
                    residual = retry_residual;
                    break;
                }
            } catch (const Error&) {
                // Stalled or saturated retry: move on to the next split.
            }
        }
    }

    return assemble_orbit(m, u, period_multiple, z, residual);
}

std::vector<SwitchDerivatives> orbit_derivatives(const SwitchedModel& m,
                                                 const PeriodicOrbit& orbit) {
    std::vector<SwitchDerivatives> out;
    out.reserve(orbit.switch_state.size());
    for (const Vector& x_sw : orbit.switch_state) {
        out.push_back({m.A1 * x_sw + m.B1 * orbit.input, m.A2 * x_sw + m.B2 * orbit.input});
    }
    return out;
}

double cycle_averaged_output(const SwitchedModel& m, const PeriodicOrbit& orbit) {
    const double T = m.ramp.T;
    const Eigen::Vector2d u = orbit.input;
    // int_0^tau x(t) dt = psi(A, tau) x0 + (int_0^tau psi(A, t) dt) B u per stage.
    Vector integral = Vector::Zero(m.dimension());
    for (std::size_t i = 0; i < orbit.duties.size(); ++i) {
        const double d = orbit.duties[i];
        integral += expm_integral(m.A1, d) * orbit.cycle_start[i] +
                    expm_double_integral(m.A1, d) * (m.B1 * u);
        integral += expm_integral(m.A2, T - d) * orbit.switch_state[i] +
                    expm_double_integral(m.A2, T - d) * (m.B2 * u);
    }
    const double span = T * static_cast<double>(orbit.duties.size());
    return (m.output_row() * integral)(0) / span;
}

}  // namespace accstab
