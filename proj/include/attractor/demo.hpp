#pragma once

#include <json.hpp>

#include <array>
#include <cstddef>
#include <optional>

namespace attractor {

struct SeparatrixRun {
    double dt = 0.0;
    std::size_t steps = 0;
    std::size_t sign_changes = 0;
    std::optional<double> first_crossing_time;
    double final_h = 0.0;
    std::optional<std::size_t> blowup_step;
};

struct SeparatrixReport {
    double mu = 0.0;
    std::array<double, 2> x0{};
    double horizon = 0.0;
    double initial_h = 0.0;
    SeparatrixRun coarse;
    SeparatrixRun fine;
};

/// Follows one long figure-eight trajectory at two step sizes and counts how
/// often H changes sign. The exact flow never crosses {H = 0}, so every
/// reported crossing is a discretisation artefact.
SeparatrixReport separatrix_demo(double mu, std::array<double, 2> x0, double dt_coarse, double dt_fine,
                                 double horizon);

nlohmann::json to_json(const SeparatrixReport& report);

} // namespace attractor
