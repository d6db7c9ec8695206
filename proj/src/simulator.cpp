#include "accstab/simulator.hpp"

#include <cmath>
#include <sstream>

namespace accstab {

namespace {

constexpr int kScanPoints = 64;       // coarse grid for crossing bracketing
constexpr double kCrossingTolFrac = 1e-12;  // Brent tolerance as fraction of T
constexpr double kDivergenceFactor = 1e6;

double characteristic_scale(const Eigen::Vector2d& u) {
    return std::max({std::abs(u(0)), std::abs(u(1)), 1.0});
}

}  // namespace

Vector propagate_stage(const Matrix& a, const Matrix& b, const Eigen::Vector2d& u,
                       const Vector& x0, double t) {
    return expm(a, t) * x0 + expm_integral(a, t) * (b * u);
}

CycleResult advance_cycle(const SwitchedModel& m, const Vector& x_n, const Eigen::Vector2d& u_n,
                          int samples_per_cycle) {
    m.validate();
    if (x_n.size() != m.dimension()) {
        raise(ErrorCategory::dimension, "advance_cycle: state size does not match model");
    }
    if (!x_n.allFinite()) {
        raise(ErrorCategory::divergence, "advance_cycle: non-finite state at cycle start");
    }

    const double T = m.ramp.T;
    const auto s1_state = [&](double t) { return propagate_stage(m.A1, m.B1, u_n, x_n, t); };
    // y - h along stage S1, with the unwrapped ramp so t = T sees V_h.
    const auto comparator_gap = [&](double t) {
        return m.output(s1_state(t), u_n) - m.ramp.value_in_cycle(t);
    };

    CycleResult res;
    const double g0 = m.output(x_n, u_n) - m.ramp.V_l;

    if (g0 < 0.0) {
        // Comparator already below the ramp at the clock edge: whole cycle in S2.
        res.duty_time = 0.0;
        res.saturated = Saturation::full_off;
        res.crossing_count = 0;
    } else {
        // Scan for the first downward crossing, then polish the bracket.
        double t_prev = 0.0, g_prev = g0;
        double bracket_lo = -1.0, bracket_hi = -1.0;
        int crossings = 0;
        for (int i = 1; i <= kScanPoints; ++i) {
            const double t_i = T * static_cast<double>(i) / kScanPoints;
            const double g_i = comparator_gap(t_i);
            if ((g_prev >= 0.0 && g_i < 0.0) || (g_prev < 0.0 && g_i >= 0.0)) {
                ++crossings;
                if (bracket_lo < 0.0 && g_prev >= 0.0 && g_i < 0.0) {
                    bracket_lo = t_prev;
                    bracket_hi = t_i;
                }
            }
            t_prev = t_i;
            g_prev = g_i;
        }
        res.crossing_count = crossings;
        if (bracket_lo < 0.0) {
            res.duty_time = T;
            res.saturated = Saturation::full_on;
        } else {
            res.duty_time =
                find_root_scalar(comparator_gap, bracket_lo, bracket_hi, kCrossingTolFrac * T);
            res.saturated = Saturation::none;
        }
    }

    const double d = res.duty_time;
    const Vector x_at_d = (d > 0.0) ? s1_state(d) : x_n;
    res.x_end = (d < T) ? propagate_stage(m.A2, m.B2, u_n, x_at_d, T - d) : x_at_d;

    if (!res.x_end.allFinite() ||
        res.x_end.lpNorm<Eigen::Infinity>() > kDivergenceFactor * characteristic_scale(u_n)) {
        raise(ErrorCategory::divergence, "advance_cycle: state diverged within the cycle");
    }

    if (samples_per_cycle > 0) {
        res.samples.reserve(static_cast<std::size_t>(samples_per_cycle));
        for (int j = 0; j < samples_per_cycle; ++j) {
            const double t = T * static_cast<double>(j) / samples_per_cycle;
            Vector x_t = (t < d) ? s1_state(t)
                                 : propagate_stage(m.A2, m.B2, u_n, x_at_d, t - d);
            const double y = m.output(x_t, u_n);
            res.samples.push_back({t, std::move(x_t), y, m.ramp.value_in_cycle(t)});
        }
    }
    return res;
}

Trajectory simulate(const SwitchedModel& m, const Vector& x0, const Eigen::Vector2d& u,
                    int n_cycles, int samples_per_cycle) {
    if (n_cycles < 1) {
        raise(ErrorCategory::domain, "simulate: n_cycles must be >= 1");
    }
    const double T = m.ramp.T;

    Trajectory tr;
    tr.strobe.push_back(x0);
    Vector x = x0;
    for (int n = 0; n < n_cycles; ++n) {
        CycleResult cycle;
        try {
            cycle = advance_cycle(m, x, u, samples_per_cycle);
        } catch (const Error& e) {
            if (e.category() == ErrorCategory::divergence) {
                std::ostringstream os;
                os << "simulate: diverged in cycle " << n << ": " << e.what();
                throw DivergenceError(os.str(), static_cast<std::size_t>(n), std::move(tr));
            }
            throw;
        }
        tr.cycle_boundaries.push_back(tr.samples.size());
        const double t0 = T * static_cast<double>(n);
        for (Sample& s : cycle.samples) {
            s.t += t0;
            tr.samples.push_back(std::move(s));
        }
        tr.duties.push_back(cycle.duty_time);
        tr.strobe.push_back(cycle.x_end);
        x = tr.strobe.back();
    }
    if (samples_per_cycle > 0) {
        // Closing sample at t = n_cycles * T; the ramp has just reset.
        tr.samples.push_back(
            {T * n_cycles, x, m.output(x, u), m.ramp.V_l});
    }
    return tr;
}

PeriodClassification detect_period(const Trajectory& tr, double tol_rel) {
    if (!(tol_rel > 0.0)) {
        raise(ErrorCategory::domain, "detect_period: tol_rel must be positive");
    }
    const std::size_t n = tr.strobe.size();
    if (n < 17) {
        raise(ErrorCategory::insufficient_data,
              "detect_period: need at least 16 completed cycles (64+ recommended)");
    }

    const std::size_t window = std::min<std::size_t>(32, n / 2);
    const std::size_t begin = n - window;

    const double initial_scale = std::max(tr.strobe.front().lpNorm<Eigen::Infinity>(), 1e-30);
    bool growing = true;
    double scale = 0.0;
    for (std::size_t i = begin; i < n; ++i) {
        const double norm = tr.strobe[i].lpNorm<Eigen::Infinity>();
        scale = std::max(scale, norm);
        if (i > begin && norm <= tr.strobe[i - 1].lpNorm<Eigen::Infinity>()) growing = false;
    }
    if (growing && tr.strobe.back().lpNorm<Eigen::Infinity>() > 1e3 * initial_scale) {
        return {PeriodClassification::Kind::diverging, 0};
    }

    for (std::size_t m = 1; 2 * m <= window; m *= 2) {
        bool match = true;
        for (std::size_t i = begin + m; i < n && match; ++i) {
            match = (tr.strobe[i] - tr.strobe[i - m]).lpNorm<Eigen::Infinity>() <= tol_rel * scale;
        }
        if (match) {
            return {PeriodClassification::Kind::periodic, static_cast<int>(m)};
        }
    }
    return {PeriodClassification::Kind::aperiodic, 0};
}

}  // namespace accstab
