#include "attractor/integrator.hpp"

#include "attractor/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace attractor {

TimeGrid TimeGrid::make(double dt, double horizon)
{
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ValidationError("time.dt must be a positive finite number");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ValidationError("time.horizon must be a positive finite number");
    }
    const double ratio = std::round(horizon / dt);
    if (ratio < 1.0) {
        throw ValidationError("time.horizon is shorter than one step");
    }
    const auto steps = static_cast<std::size_t>(ratio);
    if (std::abs(static_cast<double>(steps) * dt - horizon) > 1e-9 * horizon) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "time.horizon " << horizon << " is not a whole number of steps of time.dt " << dt;
        throw ValidationError(msg.str());
    }
    return TimeGrid{dt, horizon, steps};
}

Rk4Stepper::Rk4Stepper(std::size_t dim) : k1_(dim), k2_(dim), k3_(dim), k4_(dim), tmp_(dim) {}

namespace {

bool all_finite(std::span<const double> v)
{
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

[[noreturn]] void stage_failure(int stage)
{
    throw StageError(stage, "non-finite value in Runge-Kutta stage " + std::to_string(stage));
}

} // namespace

void Rk4Stepper::step(const VectorField& field, std::span<double> y, double dt)
{
    const std::size_t n = y.size();
    const double half = 0.5 * dt;

    field(y, k1_);
    if (!all_finite(k1_)) {
        stage_failure(1);
    }

    for (std::size_t i = 0; i < n; ++i) {
        tmp_[i] = y[i] + half * k1_[i];
    }
    if (!all_finite(tmp_)) {
        stage_failure(2);
    }
    field(tmp_, k2_);
    if (!all_finite(k2_)) {
        stage_failure(2);
    }

    for (std::size_t i = 0; i < n; ++i) {
        tmp_[i] = y[i] + half * k2_[i];
    }
    if (!all_finite(tmp_)) {
        stage_failure(3);
    }
    field(tmp_, k3_);
    if (!all_finite(k3_)) {
        stage_failure(3);
    }

    for (std::size_t i = 0; i < n; ++i) {
        tmp_[i] = y[i] + dt * k3_[i];
    }
    if (!all_finite(tmp_)) {
        stage_failure(4);
    }
    field(tmp_, k4_);
    if (!all_finite(k4_)) {
        stage_failure(4);
    }

    // Build the update in tmp_ first so a failure leaves y untouched.
    const double sixth = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
        tmp_[i] = y[i] + sixth * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
    if (!all_finite(tmp_)) {
        stage_failure(4);
    }
    std::copy(tmp_.begin(), tmp_.end(), y.begin());
}

State rk4_step(const VectorField& field, std::span<const double> y, double dt)
{
    if (!(dt > 0.0)) {
        throw ValidationError("rk4_step: dt must be positive");
    }
    State out(y.begin(), y.end());
    Rk4Stepper stepper(y.size());
    stepper.step(field, out, dt);
    return out;
}

Trajectory simulate(const VectorField& field, std::span<const double> x0, const TimeGrid& grid)
{
    if (!all_finite(x0)) {
        throw ValidationError("simulate: initial state is not finite");
    }
    Trajectory traj;
    traj.dim = x0.size();
    traj.data.reserve((grid.steps + 1) * traj.dim);
    Rk4Stepper stepper(traj.dim);
    std::vector<double> y;
    traj.blowup_step = simulate_streaming(field, x0, grid, stepper, y, [&](std::span<const double> s) {
        traj.data.insert(traj.data.end(), s.begin(), s.end());
    });
    return traj;
}

} // namespace attractor
