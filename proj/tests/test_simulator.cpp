#include <doctest.h>

#include <cmath>

#include "accstab/simulator.hpp"
#include "accstab/steady_state.hpp"
#include "fixtures.hpp"

using namespace accstab;

namespace {

// Scalar stage dynamics with a constant comparator input y = v_r: the
// crossing location decouples from the state.
SwitchedModel scalar_toy(double pole = 1.0) {
    SwitchedModel m;
    m.A1 = Matrix::Constant(1, 1, -pole);
    m.A2 = m.A1;
    m.B1 = Matrix::Zero(1, 2);
    m.B1(0, 0) = 1.0;
    m.B2 = Matrix::Zero(1, 2);
    m.C = RowVector::Zero(1);
    m.D << 0.0, 1.0;
    m.E1 = RowVector::Ones(1);
    m.E2 = m.E1;
    m.ramp = RampSignal{0.0, 1.0, 1.0};
    m.state_labels = {"x"};
    return m;
}

}  // namespace

TEST_SUITE_BEGIN("simulator");

TEST_CASE("constant comparator input above the ramp never switches (full on)") {
    const SwitchedModel m = scalar_toy();
    const Eigen::Vector2d u(1.0, 2.0);  // y = 2 > V_h = 1
    const Vector x0 = Vector::Zero(1);
    const CycleResult res = advance_cycle(m, x0, u);
    CHECK(res.saturated == Saturation::full_on);
    CHECK(res.duty_time == m.ramp.T);
    // Exactness: the whole cycle is one S1 stage.
    const Vector expected = propagate_stage(m.A1, m.B1, u, x0, m.ramp.T);
    CHECK((res.x_end - expected).norm() <= 1e-10 * expected.norm());
    // x(T) = (1 - e^-T) for xdot = -x + 1 from 0.
    CHECK(res.x_end(0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("comparator input below the ramp low level gives a full-off cycle") {
    const SwitchedModel m = scalar_toy();
    const Eigen::Vector2d u(1.0, -0.5);  // y = -0.5 < V_l = 0
    const Vector x0 = Vector::Ones(1);
    const CycleResult res = advance_cycle(m, x0, u);
    CHECK(res.saturated == Saturation::full_off);
    CHECK(res.duty_time == 0.0);
    CHECK(res.x_end(0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("constant comparator input inside the ramp crosses at the exact instant") {
    const SwitchedModel m = scalar_toy();
    const Eigen::Vector2d u(1.0, 0.25);  // ramp hits 0.25 at t = 0.25 T
    const Vector x0 = Vector::Zero(1);
    const CycleResult res = advance_cycle(m, x0, u);
    CHECK(res.saturated == Saturation::none);
    CHECK(res.duty_time == doctest::Approx(0.25 * m.ramp.T).epsilon(1e-12));
    CHECK(res.crossing_count == 1);
    // Piecewise closed form: rise for d, decay for T - d.
    const double d = res.duty_time, T = m.ramp.T;
    const double expected = (1.0 - std::exp(-d)) * std::exp(-(T - d));
    CHECK(res.x_end(0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("dense sampling does not perturb the dynamics") {
    const SwitchedModel m = build_buck_model(fixtures::buck_14v(0.21));
    const Eigen::Vector2d u(14.0, 0.5);
    Vector x0(4);
    x0 << 5.0, 5.0, 0.0, 0.0;
    const CycleResult coarse = advance_cycle(m, x0, u, 16);
    const CycleResult fine = advance_cycle(m, x0, u, 32);
    const CycleResult none = advance_cycle(m, x0, u, 0);
    CHECK(coarse.x_end == fine.x_end);  // bit identical: samples are output only
    CHECK(coarse.x_end == none.x_end);
    CHECK(coarse.duty_time == fine.duty_time);
    CHECK(fine.samples.size() == 32);
}

TEST_CASE("switching consistency on the benchmark model") {
    const SwitchedModel m = build_buck_model(fixtures::buck_14v(0.21));
    const Eigen::Vector2d u(14.0, 0.5);
    const PeriodicOrbit orbit = find_periodic_orbit(m, u, 1, fixtures::duty_guess(5.0 / 14.0));
    const CycleResult res = advance_cycle(m, orbit.x_start, u);
    const double d = res.duty_time;
    // The located crossing agrees with the shooting solver's duty, and both
    // sit at the nominal conversion ratio.
    CHECK(std::abs(d - orbit.duties[0]) <= 1e-9 * m.ramp.T);
    CHECK(d / m.ramp.T == doctest::Approx(0.357).epsilon(0.005 / 0.357));
    const Vector x_d = propagate_stage(m.A1, m.B1, u, orbit.x_start, d);
    const double gap = m.output(x_d, u) - m.ramp.value_in_cycle(d);
    CHECK(std::abs(gap) <= 1e-9 * (m.ramp.V_h - m.ramp.V_l));
    // y stays at or above the ramp before the crossing.
    for (int i = 1; i < 32; ++i) {
        const double t = d * i / 32.0;
        const Vector x_t = propagate_stage(m.A1, m.B1, u, orbit.x_start, t);
        CHECK(m.output(x_t, u) - m.ramp.value_in_cycle(t) >= -1e-9);
    }
}

TEST_CASE("simulate with one cycle reproduces advance_cycle") {
    const SwitchedModel m = build_buck_model(fixtures::buck_14v(0.30));
    const Eigen::Vector2d u(14.0, 0.5);
    Vector x0(4);
    x0 << 4.0, 4.5, 1e-5, 0.1;
    const CycleResult cycle = advance_cycle(m, x0, u);
    const Trajectory tr = simulate(m, x0, u, 1, 0);
    REQUIRE(tr.strobe.size() == 2);
    CHECK(tr.strobe[1] == cycle.x_end);
    CHECK(tr.duties[0] == cycle.duty_time);
}

TEST_CASE("simulate is deterministic") {
    const SwitchedModel m = build_buck_model(fixtures::buck_14v(0.49));
    const Eigen::Vector2d u(14.0, 0.5);
    Vector x0(4);
    x0 << 5.0, 5.0, 0.0, 0.0;
    const Trajectory a = simulate(m, x0, u, 20, 8);
    const Trajectory b = simulate(m, x0, u, 20, 8);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].x == b.samples[i].x);
        CHECK(a.samples[i].y == b.samples[i].y);
    }
    for (std::size_t i = 0; i < a.duties.size(); ++i) CHECK(a.duties[i] == b.duties[i]);
}

TEST_CASE("divergence raises an error carrying the partial trajectory") {
    SwitchedModel m = scalar_toy();
    const double T = m.ramp.T;
    m.A1 = Matrix::Constant(1, 1, 5.0 / T);  // strongly expanding stage
    m.A2 = m.A1;
    const Eigen::Vector2d u(1.0, 2.0);  // y above the ramp: full-on forever
    const Vector x0 = Vector::Ones(1);
    try {
        simulate(m, x0, u, 50, 0);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.category() == ErrorCategory::divergence);
        CHECK(e.cycle_index > 0);
        CHECK(e.cycle_index < 10);
        CHECK(e.partial.strobe.size() == e.cycle_index + 1);
        CHECK(e.partial.duties.size() == e.cycle_index);
    }
}

TEST_CASE("detect_period flags a constant stroboscopic sequence as period 1") {
    Trajectory tr;
    Vector x(2);
    x << 1.0, -2.0;
    for (int i = 0; i < 65; ++i) tr.strobe.push_back(x);
    const PeriodClassification pc = detect_period(tr, 1e-9);
    CHECK(pc.kind == PeriodClassification::Kind::periodic);
    CHECK(pc.period == 1);
}

TEST_CASE("detect_period rejects short windows") {
    Trajectory tr;
    tr.strobe.assign(8, Vector::Zero(2));
    CHECK_THROWS_AS(detect_period(tr, 1e-6), Error);
    try {
        detect_period(tr, 1e-6);
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::insufficient_data);
    }
}

TEST_CASE("detect_period flags monotone growth as diverging") {
    Trajectory tr;
    for (int i = 0; i < 64; ++i) {
        tr.strobe.push_back(Vector::Constant(2, std::pow(1.5, i)));
    }
    const PeriodClassification pc = detect_period(tr, 1e-6);
    CHECK(pc.kind == PeriodClassification::Kind::diverging);
}

TEST_CASE("instability is unrelated to ripple size on the benchmark") {
    // Small-ripple pole setting diverges from the orbit, large-ripple one
    // returns to it: classification must oppose the ripple ordering.
    const Eigen::Vector2d u(14.0, 0.5);

    const SwitchedModel m_small = build_buck_model(fixtures::buck_14v(0.21));
    const PeriodicOrbit orbit_small =
        find_periodic_orbit(m_small, u, 1, fixtures::duty_guess(5.0 / 14.0));
    Vector x0 = orbit_small.x_start * 1.01;
    const Trajectory tr_small = simulate(m_small, x0, u, 150, 0);
    const PeriodClassification pc_small = detect_period(tr_small, 1e-4);
    // The perturbation grows: the run never returns to the T-periodic orbit
    // (it heads for the coexisting subharmonic attractor instead).
    CHECK((pc_small.kind != PeriodClassification::Kind::periodic || pc_small.period > 1));
    CHECK((tr_small.strobe.back() - orbit_small.x_start).lpNorm<Eigen::Infinity>() >
          10.0 * (x0 - orbit_small.x_start).lpNorm<Eigen::Infinity>());

    const SwitchedModel m_large = build_buck_model(fixtures::buck_14v(0.81));
    const PeriodicOrbit orbit_large =
        find_periodic_orbit(m_large, u, 1, fixtures::duty_guess(5.0 / 14.0));
    x0 = orbit_large.x_start * 1.01;
    const Trajectory tr_large = simulate(m_large, x0, u, 150, 0);
    const PeriodClassification pc_large = detect_period(tr_large, 1e-4);
    CHECK(pc_large.kind == PeriodClassification::Kind::periodic);
    CHECK(pc_large.period == 1);
    // Strobes settle onto the periodic orbit itself.
    CHECK((tr_large.strobe.back() - orbit_large.x_start).lpNorm<Eigen::Infinity>() <=
          1e-4 * orbit_large.x_start.lpNorm<Eigen::Infinity>());
}

TEST_CASE("quasi-periodic growth is classified aperiodic") {
    // Complex multiplier pair just outside the unit circle: perturbations
    // spiral outward instead of settling or alternating.
    const ConverterParams p = fixtures::buck_5v(5655.0);
    const SwitchedModel m = build_buck_model(p);
    const Eigen::Vector2d u(p.v_s, p.v_r);
    const PeriodicOrbit orbit = find_periodic_orbit(m, u, 1, fixtures::duty_guess(0.4));
    const Trajectory tr = simulate(m, orbit.x_start * 1.01, u, 200, 0);
    const PeriodClassification pc = detect_period(tr, 1e-5);
    CHECK(pc.kind == PeriodClassification::Kind::aperiodic);
}

TEST_CASE("period doubling at the window edge produces an alternating attractor") {
    const SwitchedModel m = build_buck_model(fixtures::buck_14v(0.49));
    const Eigen::Vector2d u(14.0, 0.5);
    const PeriodicOrbit orbit = find_periodic_orbit(m, u, 1, fixtures::duty_guess(5.0 / 14.0));
    const Vector x0 = orbit.x_start * 1.01;
    const Trajectory tr = simulate(m, x0, u, 200, 0);
    const PeriodClassification pc = detect_period(tr, 1e-3);
    CHECK(pc.kind == PeriodClassification::Kind::periodic);
    CHECK(pc.period == 2);

    // Duties alternate late in the run and average near the nominal ratio.
    const std::size_t n = tr.duties.size();
    const double d1 = tr.duties[n - 2] / m.ramp.T;
    const double d2 = tr.duties[n - 1] / m.ramp.T;
    CHECK(std::abs(d1 - d2) > 1e-4);
    CHECK(0.5 * (d1 + d2) == doctest::Approx(0.357).epsilon(0.02));
}

TEST_SUITE_END();
