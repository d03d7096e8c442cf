#include "attractor/cover.hpp"

#include "attractor/error.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <sstream>

namespace attractor {

Domain Domain::make(std::vector<double> lo, std::vector<double> hi)
{
    if (lo.size() != hi.size()) {
        throw ValidationError("domain.lo and domain.hi have different lengths");
    }
    if (lo.empty() || lo.size() > kMaxDim) {
        throw ValidationError("domain dimension must be between 1 and 3");
    }
    for (std::size_t k = 0; k < lo.size(); ++k) {
        if (!std::isfinite(lo[k]) || !std::isfinite(hi[k]) || !(hi[k] - lo[k] > 0.0)) {
            std::ostringstream msg;
            msg << "degenerate domain along axis " << k << ": [" << lo[k] << ", " << hi[k] << "]";
            throw ValidationError(msg.str());
        }
    }
    return Domain{std::move(lo), std::move(hi)};
}

double Domain::volume() const
{
    double v = 1.0;
    for (std::size_t k = 0; k < lo.size(); ++k) {
        v *= hi[k] - lo[k];
    }
    return v;
}

GridSpec GridSpec::make(const Domain& domain, std::span<const std::uint64_t> counts)
{
    if (counts.size() != domain.dim()) {
        throw ValidationError("grid.counts has " + std::to_string(counts.size()) + " entries, domain has dimension " +
                              std::to_string(domain.dim()));
    }
    GridSpec spec;
    spec.counts.assign(counts.begin(), counts.end());
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] == 0) {
            throw ValidationError("grid.counts must be >= 1 on every axis");
        }
        spec.widths.push_back((domain.hi[k] - domain.lo[k]) / static_cast<double>(counts[k]));
    }
    return spec;
}

Cover::Cover(Domain domain, GridSpec grid, std::size_t depth, std::vector<BoxIndex> boxes)
    : domain_(std::move(domain)), grid_(std::move(grid)), depth_(depth), boxes_(std::move(boxes))
{
    const std::size_t n = domain_.dim();
    if (grid_.counts.size() != n || grid_.widths.size() != n) {
        throw ValidationError("grid and domain dimensions differ");
    }
    if (depth_ > 40) {
        throw ValidationError("subdivision depth above 40 is not supported");
    }
    for (std::size_t k = 0; k < n; ++k) {
        // h / 2^d is an exact power-of-two scaling.
        widths_.push_back(std::ldexp(grid_.widths[k], -static_cast<int>(depth_)));
        cells_.push_back(grid_.counts[k] << depth_);
    }

    std::sort(boxes_.begin(), boxes_.end());
    if (std::adjacent_find(boxes_.begin(), boxes_.end()) != boxes_.end()) {
        throw ValidationError("cover contains a duplicate box");
    }
    for (const auto& idx : boxes_) {
        for (std::size_t k = 0; k < kMaxDim; ++k) {
            const std::uint64_t limit = k < n ? cells_[k] : 1;
            if (idx[k] >= limit) {
                throw ValidationError("box index out of range for depth " + std::to_string(depth_));
            }
        }
    }
}

State Cover::box_lo(BoxId id) const
{
    const auto& idx = index(id);
    State lo(dim());
    for (std::size_t k = 0; k < dim(); ++k) {
        lo[k] = corner(k, idx[k]);
    }
    return lo;
}

State Cover::box_center(BoxId id) const
{
    State c = box_lo(id);
    for (std::size_t k = 0; k < dim(); ++k) {
        c[k] += 0.5 * widths_[k];
    }
    return c;
}

double Cover::box_volume() const
{
    double v = 1.0;
    for (double w : widths_) {
        v *= w;
    }
    return v;
}

std::optional<BoxId> Cover::find(const BoxIndex& idx) const
{
    auto it = std::lower_bound(boxes_.begin(), boxes_.end(), idx);
    if (it == boxes_.end() || *it != idx) {
        return std::nullopt;
    }
    return static_cast<BoxId>(std::distance(boxes_.begin(), it));
}

std::optional<BoxIndex> Cover::cell_of(std::span<const double> point) const
{
    const std::size_t n = dim();
    if (point.size() != n) {
        return std::nullopt;
    }
    BoxIndex idx{};
    for (std::size_t k = 0; k < n; ++k) {
        const double x = point[k];
        // Written so NaN fails the test.
        if (!(x >= domain_.lo[k] && x <= domain_.hi[k])) {
            return std::nullopt;
        }
        const std::uint64_t last = cells_[k] - 1;
        const double guess = std::floor((x - domain_.lo[k]) / widths_[k]);
        std::uint64_t i = guess <= 0.0 ? 0 : std::min(static_cast<std::uint64_t>(guess), last);
        // The division can disagree with the corner formula by one cell near a
        // face; the corners are the source of truth.
        while (i > 0 && x < corner(k, i)) {
            --i;
        }
        while (i < last && x >= corner(k, i + 1)) {
            ++i;
        }
        idx[k] = i;
    }
    return idx;
}

std::optional<BoxId> Cover::locate(std::span<const double> point) const
{
    auto cell = cell_of(point);
    if (!cell) {
        return std::nullopt;
    }
    return find(*cell);
}

Cover initial_grid(const Domain& domain, std::span<const std::uint64_t> counts)
{
    GridSpec grid = GridSpec::make(domain, counts);
    const std::size_t n = domain.dim();
    std::uint64_t total = 1;
    for (auto c : grid.counts) {
        total *= c;
    }
    std::vector<BoxIndex> boxes;
    boxes.reserve(total);
    BoxIndex idx{};
    for (std::uint64_t flat = 0; flat < total; ++flat) {
        boxes.push_back(idx);
        // Odometer over the axes, last axis fastest, which is lexicographic order.
        for (std::size_t k = n; k-- > 0;) {
            if (++idx[k] < grid.counts[k]) {
                break;
            }
            idx[k] = 0;
        }
    }
    return Cover(domain, std::move(grid), 0, std::move(boxes));
}

Cover subdivide(const Cover& cover, std::span<const BoxId> kept)
{
    if (kept.empty()) {
        throw ExtinctionError("cover extinguished: no box kept at depth " + std::to_string(cover.depth()));
    }
    const std::size_t n = cover.dim();
    const std::size_t children = std::size_t{1} << n;

    std::vector<BoxId> ids(kept.begin(), kept.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.back() >= cover.size()) {
        throw ValidationError("subdivide: kept box id out of range");
    }

    std::vector<BoxIndex> out;
    out.reserve(ids.size() * children);
    for (BoxId id : ids) {
        const BoxIndex& parent = cover.index(id);
        for (std::size_t bits = 0; bits < children; ++bits) {
            BoxIndex child{};
            for (std::size_t k = 0; k < n; ++k) {
                child[k] = 2 * parent[k] + ((bits >> (n - 1 - k)) & 1U);
            }
            out.push_back(child);
        }
    }
    return Cover(cover.domain(), cover.grid(), cover.depth() + 1, std::move(out));
}

double cover_volume(const Cover& cover)
{
    return cover.volume();
}

std::vector<State> box_centers(const Cover& cover)
{
    std::vector<State> centers;
    centers.reserve(cover.size());
    for (BoxId id = 0; id < cover.size(); ++id) {
        centers.push_back(cover.box_center(id));
    }
    return centers;
}

namespace {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

template <std::size_t D>
double semidistance_rtree(std::span<const State> a, std::span<const State> b)
{
    using Point = bg::model::point<double, D, bg::cs::cartesian>;
    auto to_point = [](const State& s) {
        Point p;
        if constexpr (D >= 1) bg::set<0>(p, s[0]);
        if constexpr (D >= 2) bg::set<1>(p, s[1]);
        if constexpr (D >= 3) bg::set<2>(p, s[2]);
        return p;
    };

    std::vector<Point> pts;
    pts.reserve(b.size());
    for (const auto& s : b) {
        pts.push_back(to_point(s));
    }
    bgi::rtree<Point, bgi::quadratic<16>> tree(pts.begin(), pts.end());

    double worst = 0.0;
    std::vector<Point> hit;
    for (const auto& s : a) {
        hit.clear();
        const Point q = to_point(s);
        tree.query(bgi::nearest(q, 1), std::back_inserter(hit));
        worst = std::max(worst, static_cast<double>(bg::distance(q, hit.front())));
    }
    return worst;
}

} // namespace

double hausdorff_semidistance(std::span<const State> a, std::span<const State> b)
{
    if (a.empty() || b.empty()) {
        throw ValidationError("hausdorff_semidistance needs two nonempty point sets");
    }
    const std::size_t n = a.front().size();
    auto same_dim = [n](const State& s) { return s.size() == n; };
    if (!std::all_of(a.begin(), a.end(), same_dim) || !std::all_of(b.begin(), b.end(), same_dim)) {
        throw ValidationError("hausdorff_semidistance: points have mixed dimensions");
    }
    switch (n) {
    case 1: return semidistance_rtree<1>(a, b);
    case 2: return semidistance_rtree<2>(a, b);
    case 3: return semidistance_rtree<3>(a, b);
    default: break;
    }
    double worst = 0.0;
    for (const auto& x : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& y : b) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                d2 += (x[k] - y[k]) * (x[k] - y[k]);
            }
            best = std::min(best, d2);
        }
        worst = std::max(worst, std::sqrt(best));
    }
    return worst;
}

} // namespace attractor
