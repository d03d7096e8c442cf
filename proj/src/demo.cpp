#include "attractor/demo.hpp"

#include "attractor/dynamics.hpp"
#include "attractor/error.hpp"
#include "attractor/integrator.hpp"

#include <cmath>
#include <vector>

namespace attractor {

namespace {

SeparatrixRun follow(const SystemDef& system, std::array<double, 2> x0, double dt, double horizon)
{
    const TimeGrid grid = TimeGrid::make(dt, horizon);
    std::vector<double> h;
    h.reserve(grid.steps + 1);
    Rk4Stepper stepper(2);
    std::vector<double> y;
    SeparatrixRun run;
    run.dt = dt;
    run.steps = grid.steps;
    run.blowup_step = simulate_streaming(system.field, x0, grid, stepper, y,
                                         [&](std::span<const double> s) { h.push_back(hamiltonian(s[0], s[1])); });
    run.sign_changes = count_sign_changes(h);
    run.final_h = h.back();
    const bool negative = h.front() < 0.0;
    for (std::size_t k = 1; k < h.size(); ++k) {
        if ((negative && h[k] > 0.0) || (!negative && h[k] < 0.0)) {
            run.first_crossing_time = static_cast<double>(k) * dt;
            break;
        }
    }
    return run;
}

} // namespace

SeparatrixReport separatrix_demo(double mu, std::array<double, 2> x0, double dt_coarse, double dt_fine,
                                 double horizon)
{
    const double h0 = hamiltonian(x0[0], x0[1]);
    if (!std::isfinite(h0) || h0 == 0.0) {
        throw ValidationError("separatrix demo needs a start point off the separatrix (H(x0) != 0)");
    }
    const SystemDef system = figure_eight(mu);
    SeparatrixReport report;
    report.mu = mu;
    report.x0 = x0;
    report.horizon = horizon;
    report.initial_h = h0;
    report.coarse = follow(system, x0, dt_coarse, horizon);
    report.fine = follow(system, x0, dt_fine, horizon);
    return report;
}

nlohmann::json to_json(const SeparatrixReport& report)
{
    auto run_json = [](const SeparatrixRun& r) {
        nlohmann::json j = {
            {"dt", r.dt},
            {"steps", r.steps},
            {"sign_changes", r.sign_changes},
            {"final_h", r.final_h},
        };
        j["first_crossing_time"] = r.first_crossing_time ? nlohmann::json(*r.first_crossing_time) : nullptr;
        j["blowup_step"] = r.blowup_step ? nlohmann::json(*r.blowup_step) : nullptr;
        return j;
    };
    return {
        {"mu", report.mu},
        {"x0", report.x0},
        {"horizon", report.horizon},
        {"initial_h", report.initial_h},
        {"coarse", run_json(report.coarse)},
        {"fine", run_json(report.fine)},
    };
}

} // namespace attractor
