#pragma once

#include "attractor/cover.hpp"
#include "attractor/dynamics.hpp"
#include "attractor/integrator.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace attractor {

/// Number of trajectory representatives per active box (dense, indexed by
/// BoxId) plus the ones that landed outside every active box.
struct HitHistogram {
    std::vector<std::uint64_t> counts;
    std::uint64_t total_points = 0;
    std::uint64_t dropped_points = 0;

    HitHistogram() = default;
    explicit HitHistogram(std::size_t boxes) : counts(boxes, 0) {}

    std::uint64_t located_points() const;
    void merge(const HitHistogram& other);
};

/// Streaming binning against a fixed cover. Trajectories usually stay in one
/// box for many consecutive steps, so the last hit is cached.
class HitCounter {
public:
    explicit HitCounter(const Cover& cover) : cover_(&cover), hist_(cover.size()) {}

    void add(std::span<const double> point);
    const HitHistogram& histogram() const noexcept { return hist_; }
    HitHistogram take() { return std::move(hist_); }

private:
    const Cover* cover_;
    HitHistogram hist_;
    std::optional<BoxIndex> last_cell_;
    std::optional<BoxId> last_id_;
};

HitHistogram count_hits(const Cover& cover, std::span<const Trajectory> trajectories);

/// Mean-value filter threshold: located points divided by the number of
/// active boxes (empty boxes count in the denominator).
double mean_threshold(const HitHistogram& hist, std::size_t active_box_count);

/// Boxes whose count is >= epsilon. Throws ExtinctionError if none survive.
std::vector<BoxId> filter_boxes(const Cover& cover, const HitHistogram& hist, double epsilon);

enum class ThresholdRule { mean };

struct RunConfig {
    std::string preset; // informational; empty for hand-written configs
    std::string system_name;
    ParamMap params;
    Domain domain;
    std::vector<std::uint64_t> initial_counts;
    double dt = 0.0;
    double horizon = 0.0;
    std::size_t iterations = 1;
    ThresholdRule threshold_rule = ThresholdRule::mean;
    std::size_t workers = 1;

    /// Throws ValidationError describing the first problem found.
    void validate() const;
    SystemDef system() const;
    TimeGrid time_grid() const;
};

struct IterationReport {
    std::size_t iteration = 0;
    std::size_t depth = 0; // depth of the cover that was filtered
    std::size_t boxes_before = 0;
    std::size_t boxes_kept = 0;
    std::size_t boxes_after = 0;
    double epsilon = 0.0;
    double volume_before = 0.0;
    double volume_after = 0.0;
    // d{centers(before) | centers(after)}
    std::optional<double> semidistance_to_previous;
    std::size_t seeds = 0;
    std::size_t blowups = 0;
    std::uint64_t total_points = 0;
    std::uint64_t dropped_points = 0;
    double wall_time = 0.0; // seconds
};

struct IterationOutcome {
    HitHistogram hist;
    std::vector<BoxId> kept;
    Cover next;
    IterationReport report;
};

/// One pass of seed -> simulate -> count -> filter -> subdivide.
/// Results do not depend on `workers`.
IterationOutcome run_iteration(const SystemDef& system, const Cover& cover, const TimeGrid& grid,
                               std::size_t iteration = 1, std::size_t workers = 1);

// Called after every iteration with the cover that was filtered and the outcome.
using IterationSink = std::function<void(const Cover& filtered, const IterationOutcome& outcome)>;

struct RunResult {
    Cover final_cover;
    std::vector<IterationReport> reports;
};

RunResult run_algorithm(const RunConfig& config, std::span<const IterationSink> sinks = {});

} // namespace attractor
