#include "attractor/dynamics.hpp"

#include "attractor/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace attractor {

double SystemDef::param(std::string_view key) const
{
    auto it = params.find(key);
    if (it == params.end()) {
        throw ValidationError("system '" + name + "' has no parameter '" + std::string(key) + "'");
    }
    return it->second;
}

State eval_field(const SystemDef& system, std::span<const double> state)
{
    if (state.size() != system.dim) {
        std::ostringstream msg;
        msg << "state has dimension " << state.size() << ", system '" << system.name << "' expects "
            << system.dim;
        throw ValidationError(msg.str());
    }
    if (!std::all_of(state.begin(), state.end(), [](double v) { return std::isfinite(v); })) {
        throw DomainError("non-finite state passed to '" + system.name + "'");
    }
    State out(system.dim);
    system.field(state, out);
    return out;
}

double hamiltonian(double q, double p)
{
    return 0.5 * p * p + q * q * q * q - q * q;
}

std::array<double, 2> hamiltonian_gradient(double q, double p)
{
    return {4.0 * q * q * q - 2.0 * q, p};
}

SystemDef figure_eight(double mu)
{
    SystemDef sys;
    sys.name = "eight";
    sys.dim = 2;
    sys.params = {{"mu", mu}};
    // q' = dH/dp - mu H dH/dq,  p' = -dH/dq - mu H dH/dp
    sys.field = [mu](std::span<const double> x, std::span<double> dx) {
        const double q = x[0];
        const double p = x[1];
        const double h = hamiltonian(q, p);
        const double hq = 4.0 * q * q * q - 2.0 * q;
        const double hp = p;
        dx[0] = hp - mu * h * hq;
        dx[1] = -hq - mu * h * hp;
    };
    const double r = std::numbers::sqrt2 / 2.0;
    sys.equilibria = {{0.0, 0.0}, {r, 0.0}, {-r, 0.0}};
    sys.hamiltonian = [](std::span<const double> x) { return hamiltonian(x[0], x[1]); };
    return sys;
}

SystemDef holling_tanner(double n)
{
    SystemDef sys;
    sys.name = "holling-tanner";
    sys.dim = 2;
    sys.params = {{"N", n}};
    sys.field = [n](std::span<const double> s, std::span<double> ds) {
        const double x = s[0];
        const double y = s[1];
        if (!(x > 0.0)) {
            throw DomainError("holling-tanner field is undefined for prey x <= 0");
        }
        ds[0] = x * (1.0 - x / 7.0) - 6.0 * x * y / (7.0 + 7.0 * x);
        ds[1] = 0.2 * y * (1.0 - n * y / x);
    };
    // Interior equilibrium: y = x/N and x(1 - x/7) = 6xy/(7 + 7x).
    // With y = x/N this reduces to N(7 - x)(1 + x) = 6x, i.e.
    // N x^2 + (6 - 6N) x - 7N = 0.
    if (n > 0.0) {
        const double b = 6.0 - 6.0 * n;
        const double x = (-b + std::sqrt(b * b + 28.0 * n * n)) / (2.0 * n);
        sys.equilibria = {{x, x / n}};
    }
    return sys;
}

SystemDef fluid_structure(double gamma)
{
    SystemDef sys;
    sys.name = "fluid-structure";
    sys.dim = 3;
    sys.params = {{"gamma", gamma}};
    sys.field = [gamma](std::span<const double> s, std::span<double> ds) {
        const double x = s[0];
        const double y = s[1];
        const double z = s[2];
        const double cubic = 0.5 * (gamma - 1.0) * x - 0.5 * x * x * x;
        ds[0] = y;
        ds[1] = 1.5 * z + cubic;
        ds[2] = -y - 5.5 * z - cubic;
    };
    sys.equilibria = {{0.0, 0.0, 0.0}};
    if (gamma > 1.0) {
        const double x = std::sqrt(gamma - 1.0);
        sys.equilibria.push_back({x, 0.0, 0.0});
        sys.equilibria.push_back({-x, 0.0, 0.0});
    }
    return sys;
}

SystemDef hopf(double mu, double nu, double beta)
{
    SystemDef sys;
    sys.name = "hopf";
    sys.dim = 3;
    sys.params = {{"beta", beta}, {"mu", mu}, {"nu", nu}};
    sys.field = [mu, nu, beta](std::span<const double> s, std::span<double> ds) {
        const double x = s[0];
        const double y = s[1];
        const double z = s[2];
        ds[0] = -mu * x - y * y - z * z;
        ds[1] = -nu * y + x * y + beta * z;
        ds[2] = -nu * z + x * z - beta * y;
    };
    sys.equilibria = {{0.0, 0.0, 0.0}};
    return sys;
}

std::vector<std::string> system_names()
{
    return {"eight", "holling-tanner", "fluid-structure", "hopf"};
}

SystemDef make_system(std::string_view name, const ParamMap& overrides)
{
    SystemDef base;
    if (name == "eight") {
        base = figure_eight();
    } else if (name == "holling-tanner") {
        base = holling_tanner();
    } else if (name == "fluid-structure") {
        base = fluid_structure();
    } else if (name == "hopf") {
        base = hopf();
    } else {
        throw ValidationError("unknown system '" + std::string(name) + "'");
    }

    ParamMap params = base.params;
    for (const auto& [key, value] : overrides) {
        auto it = params.find(key);
        if (it == params.end()) {
            throw ValidationError("system '" + base.name + "' has no parameter '" + key + "'");
        }
        if (!std::isfinite(value)) {
            throw ValidationError("parameter '" + key + "' must be finite");
        }
        it->second = value;
    }

    if (name == "eight") {
        if (!(params.at("mu") > 0.0)) {
            throw ValidationError("eight: mu must be positive");
        }
        return figure_eight(params.at("mu"));
    }
    if (name == "holling-tanner") {
        if (!(params.at("N") > 0.0)) {
            throw ValidationError("holling-tanner: N must be positive");
        }
        return holling_tanner(params.at("N"));
    }
    if (name == "fluid-structure") {
        return fluid_structure(params.at("gamma"));
    }
    if (!(params.at("mu") > 0.0)) {
        throw ValidationError("hopf: mu must be positive");
    }
    return hopf(params.at("mu"), params.at("nu"), params.at("beta"));
}

std::vector<std::array<double, 2>> separatrix_samples(std::size_t count)
{
    if (count < 2) {
        throw ValidationError("separatrix_samples needs count >= 2");
    }
    // Walk the closed curve by an angle-like parameter s in [0, 4): each unit
    // of s is one quarter (upper/lower half of the right/left lobe), with
    // q = +-sin(pi s / 2)-style sweeps. On {H = 0}, p = +-q sqrt(2 (1 - q^2)),
    // which is exact for every q in [-1, 1] and keeps |H| at rounding level.
    std::vector<std::array<double, 2>> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double s = 4.0 * static_cast<double>(i) / static_cast<double>(count);
        const auto quarter = static_cast<int>(s);
        const double u = s - quarter; // in [0, 1)
        double q = 0.0;
        double sign = 1.0;
        switch (quarter) {
        case 0: q = std::sin(0.5 * std::numbers::pi * u); sign = 1.0; break;   // (0,0) -> (1,0), upper
        case 1: q = std::cos(0.5 * std::numbers::pi * u); sign = -1.0; break;  // (1,0) -> (0,0), lower
        case 2: q = -std::sin(0.5 * std::numbers::pi * u); sign = 1.0; break;  // (0,0) -> (-1,0), upper
        default: q = -std::cos(0.5 * std::numbers::pi * u); sign = -1.0; break; // (-1,0) -> (0,0), lower
        }
        // The quarter boundaries land on the junction and the tips exactly.
        if (u == 0.0) {
            q = (quarter == 1) ? 1.0 : (quarter == 3 ? -1.0 : 0.0);
        }
        const double p = sign * std::abs(q) * std::sqrt(2.0 * (1.0 - q * q));
        out.push_back({q, p});
    }
    // Snap the extreme samples onto the tips so both are always present.
    auto by_q = [](const auto& a, const auto& b) { return a[0] < b[0]; };
    *std::max_element(out.begin() + 1, out.end(), by_q) = {1.0, 0.0};
    if (count >= 3) {
        *std::min_element(out.begin() + 1, out.end(), by_q) = {-1.0, 0.0};
    }
    return out;
}

std::size_t count_sign_changes(std::span<const double> values)
{
    std::size_t changes = 0;
    int previous = 0;
    for (double v : values) {
        int sign = (v > 0.0) ? 1 : (v < 0.0 ? -1 : 0);
        if (sign == 0) {
            continue;
        }
        if (previous != 0 && sign != previous) {
            ++changes;
        }
        previous = sign;
    }
    return changes;
}

} // namespace attractor
