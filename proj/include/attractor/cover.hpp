#pragma once

#include "attractor/dynamics.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace attractor {

inline constexpr std::size_t kMaxDim = 3;

/// Axis-aligned rectangle [lo, hi] that should contain an absorbing set.
struct Domain {
    std::vector<double> lo;
    std::vector<double> hi;

    static Domain make(std::vector<double> lo, std::vector<double> hi);

    std::size_t dim() const noexcept { return lo.size(); }
    double volume() const;
};

/// Uniform cell counts per axis on a Domain; widths[k] = (hi[k] - lo[k]) / counts[k].
struct GridSpec {
    std::vector<std::uint64_t> counts;
    std::vector<double> widths;

    static GridSpec make(const Domain& domain, std::span<const std::uint64_t> counts);
};

// Integer multi-index of a box at a given depth. Axes beyond the dimension stay 0.
using BoxIndex = std::array<std::uint64_t, kMaxDim>;

struct BoxRegion {
    std::size_t depth = 0;
    BoxIndex idx{};
};

// Position of a box inside its cover's canonical (lexicographic) order.
using BoxId = std::size_t;

/// The active boxes of one iteration. All boxes share one depth; at depth d the
/// box width along axis k is h[k] / 2^d and box `idx` spans the half-open
/// interval [lo[k] + idx[k] w[k], lo[k] + (idx[k] + 1) w[k]). Corners are
/// always computed from integers, so neighbours and parents/children agree on
/// shared faces bit for bit.
class Cover {
public:
    Cover(Domain domain, GridSpec grid, std::size_t depth, std::vector<BoxIndex> boxes);

    const Domain& domain() const noexcept { return domain_; }
    const GridSpec& grid() const noexcept { return grid_; }
    std::size_t depth() const noexcept { return depth_; }
    std::size_t dim() const noexcept { return domain_.dim(); }
    std::size_t size() const noexcept { return boxes_.size(); }
    bool empty() const noexcept { return boxes_.empty(); }

    std::span<const BoxIndex> boxes() const noexcept { return boxes_; }
    const BoxIndex& index(BoxId id) const { return boxes_.at(id); }
    BoxRegion region(BoxId id) const { return {depth_, index(id)}; }

    double width(std::size_t axis) const { return widths_[axis]; }
    std::uint64_t cells_per_axis(std::size_t axis) const { return cells_[axis]; }
    double corner(std::size_t axis, std::uint64_t i) const
    {
        return domain_.lo[axis] + static_cast<double>(i) * widths_[axis];
    }

    State box_lo(BoxId id) const;
    State box_center(BoxId id) const;
    double box_volume() const;
    double volume() const { return box_volume() * static_cast<double>(boxes_.size()); }

    std::optional<BoxId> find(const BoxIndex& idx) const;

    /// Lattice cell at this depth containing `point`, whether or not it is an
    /// active box. Points on the domain's upper face go to the last cell;
    /// points outside the closed domain (or non-finite) give nullopt.
    std::optional<BoxIndex> cell_of(std::span<const double> point) const;

    std::optional<BoxId> locate(std::span<const double> point) const;

private:
    Domain domain_;
    GridSpec grid_;
    std::size_t depth_;
    std::vector<BoxIndex> boxes_;
    std::vector<double> widths_;
    std::vector<std::uint64_t> cells_;
};

/// Depth-0 cover with every cell of the grid active.
Cover initial_grid(const Domain& domain, std::span<const std::uint64_t> counts);

/// Replaces every kept box by its 2^n children (2 idx + b, b in {0,1}^n).
/// Throws ExtinctionError when nothing is kept.
Cover subdivide(const Cover& cover, std::span<const BoxId> kept);

double cover_volume(const Cover& cover);

std::vector<State> box_centers(const Cover& cover);

/// sup over a of the distance to the nearest point of b (Euclidean). Asymmetric.
double hausdorff_semidistance(std::span<const State> a, std::span<const State> b);

} // namespace attractor
