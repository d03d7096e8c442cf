#pragma once

#include "attractor/dynamics.hpp"
#include "attractor/error.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace attractor {

/// Fixed time step over (0, horizon]. `steps * dt` reproduces the horizon to
/// one part in 1e9; `make` rejects pairs that do not.
struct TimeGrid {
    double dt = 0.0;
    double horizon = 0.0;
    std::size_t steps = 0;

    static TimeGrid make(double dt, double horizon);
};

/// Classical 4th-order Runge-Kutta for autonomous fields. Holds the stage
/// buffers so a hot loop does not allocate; one instance per thread.
class Rk4Stepper {
public:
    explicit Rk4Stepper(std::size_t dim);

    /// Advances `y` in place by one step. Throws StageError naming the first
    /// stage whose input or slope stops being finite; `y` is then unchanged.
    void step(const VectorField& field, std::span<double> y, double dt);

    std::size_t dim() const noexcept { return k1_.size(); }

private:
    std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

State rk4_step(const VectorField& field, std::span<const double> y, double dt);

/// States visited by one trajectory, flattened row-major.
struct Trajectory {
    std::size_t dim = 0;
    std::vector<double> data;
    // Index of the step that failed (1-based: the step producing state k),
    // set when the trajectory was truncated by a blow-up.
    std::optional<std::size_t> blowup_step;

    std::size_t size() const noexcept { return dim == 0 ? 0 : data.size() / dim; }
    std::span<const double> operator[](std::size_t k) const { return {data.data() + k * dim, dim}; }
};

/// Streams x0, S_dt x0, ..., S_{steps dt} x0 into `visit(std::span<const double>)`
/// without storing them. Returns the failing step on blow-up, after having
/// visited the finite prefix.
template <typename Visitor>
std::optional<std::size_t> simulate_streaming(const VectorField& field, std::span<const double> x0,
                                              const TimeGrid& grid, Rk4Stepper& stepper, std::vector<double>& y,
                                              Visitor&& visit);

Trajectory simulate(const VectorField& field, std::span<const double> x0, const TimeGrid& grid);

// ---------------------------------------------------------------------------

template <typename Visitor>
std::optional<std::size_t> simulate_streaming(const VectorField& field, std::span<const double> x0,
                                              const TimeGrid& grid, Rk4Stepper& stepper, std::vector<double>& y,
                                              Visitor&& visit)
{
    y.assign(x0.begin(), x0.end());
    visit(std::span<const double>(y));
    for (std::size_t k = 1; k <= grid.steps; ++k) {
        try {
            stepper.step(field, y, grid.dt);
        } catch (const StageError&) {
            return k;
        } catch (const DomainError&) {
            return k;
        }
        visit(std::span<const double>(y));
    }
    return std::nullopt;
}

} // namespace attractor
