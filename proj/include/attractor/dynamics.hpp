#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace attractor {

using State = std::vector<double>;

// Writes F(x) into dx. Both spans have the system dimension.
using VectorField = std::function<void(std::span<const double> x, std::span<double> dx)>;

using ScalarFunction = std::function<double(std::span<const double> x)>;

using ParamMap = std::map<std::string, double, std::less<>>;

/// An autonomous vector field on R^dim together with whatever analytic
/// knowledge we have about it. Values are immutable after construction and
/// `field` is pure, so a SystemDef can be shared freely between threads.
struct SystemDef {
    std::string name;
    std::size_t dim = 0;
    ParamMap params;
    VectorField field;
    std::vector<State> equilibria;
    ScalarFunction hamiltonian; // empty unless the system has one

    double param(std::string_view key) const;
};

/// Checked evaluation: rejects dimension mismatches and non-finite input.
State eval_field(const SystemDef& system, std::span<const double> state);

// Built-in systems. Default arguments are the values used by the presets.
SystemDef figure_eight(double mu = 0.5);
SystemDef holling_tanner(double n = 0.5);
SystemDef fluid_structure(double gamma = 3.0);
SystemDef hopf(double mu = 4.0, double nu = 1.0, double beta = -0.25);

/// Builds a built-in system by name ("eight", "holling-tanner",
/// "fluid-structure", "hopf"). Overrides must name existing parameters.
SystemDef make_system(std::string_view name, const ParamMap& overrides = {});

std::vector<std::string> system_names();

// Figure-eight Hamiltonian H(q, p) = p^2/2 + q^4 - q^2 and its gradient.
double hamiltonian(double q, double p);
std::array<double, 2> hamiltonian_gradient(double q, double p);

/// `count` points on {H = 0}, spread over both lobes. Always contains the
/// junction (0, 0) and the tips (+-1, 0); with count == 2 only (1, 0).
std::vector<std::array<double, 2>> separatrix_samples(std::size_t count);

/// Number of adjacent sign flips. Zeros inherit the sign seen before them.
std::size_t count_sign_changes(std::span<const double> values);

} // namespace attractor
