#include <catch_amalgamated.hpp>

#include "attractor/dynamics.hpp"
#include "attractor/error.hpp"
#include "attractor/integrator.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace attractor;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const VectorField kZero = [](std::span<const double>, std::span<double> dx) {
    std::fill(dx.begin(), dx.end(), 0.0);
};

const VectorField kGrowth = [](std::span<const double> x, std::span<double> dx) { dx[0] = x[0]; };

const VectorField kRotation = [](std::span<const double> x, std::span<double> dx) {
    dx[0] = -x[1];
    dx[1] = x[0];
};

// Independent oracle: RK4 on y' = y reproduces the degree-4 Taylor polynomial of e^h.
double taylor4(double h)
{
    return 1.0 + h + h * h / 2.0 + h * h * h / 6.0 + h * h * h * h / 24.0;
}

double rk4_error_on_unit_interval(double dt)
{
    const auto grid = TimeGrid::make(dt, 1.0);
    const auto traj = simulate(kGrowth, State{1.0}, grid);
    return std::abs(traj[traj.size() - 1][0] - std::numbers::e);
}

} // namespace

TEST_CASE("TimeGrid validation", "[integrator]")
{
    const auto g = TimeGrid::make(0.01, 20.0);
    CHECK(g.steps == 2000);
    CHECK(TimeGrid::make(0.1, 1.0).steps == 10);
    CHECK_THROWS_AS(TimeGrid::make(0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(TimeGrid::make(-0.1, 1.0), ValidationError);
    CHECK_THROWS_AS(TimeGrid::make(0.01, 0.0), ValidationError);
    CHECK_THROWS_AS(TimeGrid::make(0.3, 1.0), ValidationError);
    CHECK_THROWS_AS(TimeGrid::make(0.01, std::numeric_limits<double>::infinity()), ValidationError);
}

TEST_CASE("rk4_step on a zero field is the identity", "[integrator]")
{
    const State s{0.25, -3.5, 7.0};
    for (double dt : {1e-3, 0.5, 10.0}) {
        CHECK(rk4_step(kZero, s, dt) == s);
    }
}

TEST_CASE("rk4_step on y' = y matches the Taylor polynomial", "[integrator]")
{
    CHECK(taylor4(0.1) == 1.1051708333333333);
    const auto y = rk4_step(kGrowth, State{1.0}, 0.1);
    CHECK_THAT(y[0], WithinRel(1.1051708333333333, 1e-15));
    for (double h : {0.5, 0.25, 0.01}) {
        CHECK_THAT(rk4_step(kGrowth, State{1.0}, h)[0], WithinRel(taylor4(h), 1e-15));
    }
}

TEST_CASE("rk4_step keeps an equilibrium exactly", "[integrator]")
{
    const auto sys = figure_eight();
    CHECK(rk4_step(sys.field, State{0.0, 0.0}, 0.01) == State{0.0, 0.0});
    // 1/sqrt(2) is rounded, so the step may move it by rounding only.
    const State eq{1.0 / std::numbers::sqrt2, 0.0};
    const auto y = rk4_step(sys.field, eq, 0.01);
    CHECK_THAT(y[0], WithinAbs(eq[0], 1e-16));
    CHECK_THAT(y[1], WithinAbs(0.0, 1e-16));
}

TEST_CASE("rk4_step reports the failing stage", "[integrator]")
{
    // Finite below 5, NaN from 5 on: starting at 4 with dt = 2 the first stage
    // is fine (F(4) = 1) and the second stage input 4 + 1 = 5 already fails.
    const VectorField wall = [](std::span<const double> x, std::span<double> dx) {
        dx[0] = x[0] < 5.0 ? 1.0 : std::numeric_limits<double>::quiet_NaN();
    };
    try {
        rk4_step(wall, State{4.0}, 2.0);
        FAIL("expected a StageError");
    } catch (const StageError& e) {
        CHECK(e.stage() == 2);
    }
    try {
        rk4_step(wall, State{4.0}, 1.0);
        FAIL("expected a StageError");
    } catch (const StageError& e) {
        CHECK(e.stage() == 4);
    }
    try {
        rk4_step(wall, State{6.0}, 1.0);
        FAIL("expected a StageError");
    } catch (const StageError& e) {
        CHECK(e.stage() == 1);
    }
    CHECK_THROWS_AS(rk4_step(kZero, State{1.0}, 0.0), ValidationError);
}

TEST_CASE("simulate returns steps + 1 states", "[integrator]")
{
    const auto sys = figure_eight();
    const State eq{0.0, 0.0};
    const auto one = simulate(sys.field, eq, TimeGrid::make(0.01, 0.01));
    REQUIRE(one.size() == 2);
    CHECK(State(one[0].begin(), one[0].end()) == eq);
    CHECK(State(one[1].begin(), one[1].end()) == eq);

    const auto long_run = simulate(sys.field, State{0.3, 0.2}, TimeGrid::make(0.01, 20.0));
    CHECK(long_run.size() == 2001);
    CHECK_FALSE(long_run.blowup_step.has_value());
    CHECK(long_run[0][0] == 0.3);
}

TEST_CASE("one RK4 step of a rotation nearly preserves the norm", "[integrator]")
{
    const auto traj = simulate(kRotation, State{1.0, 0.0}, TimeGrid::make(0.1, 0.1));
    const auto end = traj[1];
    CHECK_THAT(std::hypot(end[0], end[1]), WithinAbs(1.0, 1e-6));
}

TEST_CASE("RK4 global error is fourth order", "[integrator][property]")
{
    for (double dt : {0.1, 0.05}) {
        const double ratio = rk4_error_on_unit_interval(dt) / rk4_error_on_unit_interval(dt / 2.0);
        INFO("dt = " << dt << ", ratio = " << ratio);
        CHECK(ratio >= 12.0);
        CHECK(ratio <= 20.0);
    }
}

TEST_CASE("trajectories from declared equilibria are constant", "[integrator][property]")
{
    for (const auto& name : system_names()) {
        const auto sys = make_system(name);
        for (const auto& eq : sys.equilibria) {
            const auto traj = simulate(sys.field, eq, TimeGrid::make(0.01, 1.0));
            for (std::size_t k = 0; k < traj.size(); ++k) {
                // An equilibrium known only to rounding may drift by rounding.
                for (std::size_t i = 0; i < eq.size(); ++i) {
                    REQUIRE_THAT(traj[k][i], WithinAbs(eq[i], 1e-12));
                }
            }
        }
    }
    // Exactly representable equilibria stay bit-identical.
    const auto sys = hopf();
    const auto traj = simulate(sys.field, State{0.0, 0.0, 0.0}, TimeGrid::make(0.01, 1.0));
    CHECK(std::all_of(traj.data.begin(), traj.data.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("simulate is deterministic", "[integrator]")
{
    const auto sys = hopf();
    const State x0{0.5, -0.3, 1.2};
    const auto grid = TimeGrid::make(0.01, 5.0);
    CHECK(simulate(sys.field, x0, grid).data == simulate(sys.field, x0, grid).data);
}

TEST_CASE("blow-up truncates the trajectory and keeps the finite prefix", "[integrator]")
{
    // x' = 1 until x reaches 5; from x = 4 a unit step's 4th stage hits the wall.
    const VectorField wall = [](std::span<const double> x, std::span<double> dx) {
        dx[0] = x[0] < 5.0 ? 1.0 : std::numeric_limits<double>::quiet_NaN();
    };
    const auto traj = simulate(wall, State{0.0}, TimeGrid::make(1.0, 10.0));
    REQUIRE(traj.blowup_step.has_value());
    CHECK(*traj.blowup_step == 5);
    CHECK(traj.size() == 5);
    CHECK(traj[4][0] == 4.0);

    // A field that leaves its domain is treated the same way.
    const VectorField leaves = [](std::span<const double> x, std::span<double> dx) {
        if (x[0] <= 0.0) {
            throw DomainError("outside");
        }
        dx[0] = -1.0;
    };
    const auto t2 = simulate(leaves, State{2.5}, TimeGrid::make(1.0, 10.0));
    REQUIRE(t2.blowup_step.has_value());
    CHECK(t2.size() == 3);

    CHECK_THROWS_AS(simulate(kZero, State{std::numeric_limits<double>::quiet_NaN()}, TimeGrid::make(1.0, 1.0)),
                    ValidationError);
}
