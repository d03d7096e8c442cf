#pragma once

#include "attractor/cover.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace attractor {

struct RenderSpec {
    // Pair of axes to project onto. Unset: (0, 1) for 2D, all three pairs for 3D.
    std::optional<std::array<std::size_t, 2>> axes;
    int size_px = 1000;   // side of the square plot area
    int margin_px = 60;   // room for tick and axis labels
    std::string fill = "#3b6ea8";
    double fill_opacity = 1.0;
    bool frame = true;
    std::vector<std::string> axis_labels = {"x", "y", "z"};
};

/// SVG text for one projection. Every kept box becomes one <rect>; the plot
/// area maps the domain onto [0, size_px]^2 with the vertical axis pointing up.
std::string svg_document(const Cover& cover, std::span<const BoxId> kept, std::array<std::size_t, 2> axes,
                         const RenderSpec& spec);

/// Writes the projection(s) and returns the files written. A 3D cover without
/// explicit axes produces `<stem>_xy`, `<stem>_xz` and `<stem>_yz` files.
std::vector<std::filesystem::path> render_svg(const Cover& cover, std::span<const BoxId> kept,
                                              const RenderSpec& spec, const std::filesystem::path& path);

} // namespace attractor
