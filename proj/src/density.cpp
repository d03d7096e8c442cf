#include "attractor/density.hpp"

#include "attractor/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

namespace attractor {

std::uint64_t HitHistogram::located_points() const
{
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

void HitHistogram::merge(const HitHistogram& other)
{
    if (other.counts.size() != counts.size()) {
        throw ValidationError("cannot merge histograms built against different covers");
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
        counts[i] += other.counts[i];
    }
    total_points += other.total_points;
    dropped_points += other.dropped_points;
}

void HitCounter::add(std::span<const double> point)
{
    ++hist_.total_points;
    auto cell = cover_->cell_of(point);
    if (!cell) {
        ++hist_.dropped_points;
        return;
    }
    if (!last_cell_ || *last_cell_ != *cell) {
        last_cell_ = cell;
        last_id_ = cover_->find(*cell);
    }
    if (last_id_) {
        ++hist_.counts[*last_id_];
    } else {
        ++hist_.dropped_points;
    }
}

HitHistogram count_hits(const Cover& cover, std::span<const Trajectory> trajectories)
{
    HitCounter counter(cover);
    for (const auto& traj : trajectories) {
        for (std::size_t k = 0; k < traj.size(); ++k) {
            counter.add(traj[k]);
        }
    }
    return counter.take();
}

double mean_threshold(const HitHistogram& hist, std::size_t active_box_count)
{
    if (active_box_count == 0) {
        throw ValidationError("mean_threshold needs at least one active box");
    }
    return static_cast<double>(hist.located_points()) / static_cast<double>(active_box_count);
}

std::vector<BoxId> filter_boxes(const Cover& cover, const HitHistogram& hist, double epsilon)
{
    if (!(epsilon >= 0.0)) {
        throw ValidationError("filter threshold must be >= 0");
    }
    if (hist.counts.size() != cover.size()) {
        throw ValidationError("histogram was not built against this cover");
    }
    std::vector<BoxId> kept;
    for (BoxId id = 0; id < cover.size(); ++id) {
        if (static_cast<double>(hist.counts[id]) >= epsilon) {
            kept.push_back(id);
        }
    }
    if (kept.empty()) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "cover extinguished: epsilon " << epsilon << " discarded all " << cover.size() << " boxes ("
            << hist.located_points() << " located, " << hist.dropped_points << " dropped of "
            << hist.total_points << " points)";
        throw ExtinctionError(msg.str());
    }
    return kept;
}

void RunConfig::validate() const
{
    if (system_name.empty()) {
        throw ValidationError("system.name is required");
    }
    const SystemDef sys = system();
    if (domain.dim() != sys.dim) {
        throw ValidationError("domain has dimension " + std::to_string(domain.dim()) + " but system '" +
                              sys.name + "' has dimension " + std::to_string(sys.dim));
    }
    Domain::make(domain.lo, domain.hi);
    GridSpec::make(domain, initial_counts);
    time_grid();
    if (iterations < 1) {
        throw ValidationError("run.iterations must be >= 1");
    }
    if (workers < 1) {
        throw ValidationError("run.workers must be >= 1");
    }
}

SystemDef RunConfig::system() const
{
    return make_system(system_name, params);
}

TimeGrid RunConfig::time_grid() const
{
    return TimeGrid::make(dt, horizon);
}

namespace {

struct WorkerResult {
    HitHistogram hist;
    std::size_t blowups = 0;
};

WorkerResult simulate_range(const SystemDef& system, const Cover& cover, const TimeGrid& grid, BoxId first,
                            BoxId last)
{
    HitCounter counter(cover);
    Rk4Stepper stepper(cover.dim());
    std::vector<double> y;
    std::size_t blowups = 0;
    for (BoxId id = first; id < last; ++id) {
        const State seed = cover.box_center(id);
        auto failed = simulate_streaming(system.field, seed, grid, stepper, y,
                                         [&](std::span<const double> s) { counter.add(s); });
        if (failed) {
            ++blowups;
        }
    }
    return {counter.take(), blowups};
}

} // namespace

IterationOutcome run_iteration(const SystemDef& system, const Cover& cover, const TimeGrid& grid,
                               std::size_t iteration, std::size_t workers)
{
    if (cover.empty()) {
        throw ExtinctionError("run_iteration called on an empty cover");
    }
    if (cover.dim() != system.dim) {
        throw ValidationError("cover and system dimensions differ");
    }
    const auto started = std::chrono::steady_clock::now();

    // Seeds are split into contiguous chunks; each worker fills a private
    // histogram and the merge is integer addition, so the result does not
    // depend on the split.
    const std::size_t seeds = cover.size();
    workers = std::clamp<std::size_t>(workers, 1, seeds);
    std::vector<WorkerResult> partial(workers);
    if (workers == 1) {
        partial[0] = simulate_range(system, cover, grid, 0, seeds);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w) {
                const BoxId first = seeds * w / workers;
                const BoxId last = seeds * (w + 1) / workers;
                pool.emplace_back([&, w, first, last] {
                    try {
                        partial[w] = simulate_range(system, cover, grid, first, last);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    HitHistogram hist(cover.size());
    std::size_t blowups = 0;
    for (const auto& part : partial) {
        hist.merge(part.hist);
        blowups += part.blowups;
    }

    if (blowups * 100 > seeds) {
        std::ostringstream msg;
        msg << blowups << " of " << seeds
            << " trajectories blew up (budget 1%); the domain probably does not contain an absorbing set";
        throw BlowupBudgetError(msg.str());
    }

    const double epsilon = mean_threshold(hist, cover.size());
    std::vector<BoxId> kept = filter_boxes(cover, hist, epsilon);
    Cover next = subdivide(cover, kept);

    IterationReport report;
    report.iteration = iteration;
    report.depth = cover.depth();
    report.boxes_before = cover.size();
    report.boxes_kept = kept.size();
    report.boxes_after = next.size();
    report.epsilon = epsilon;
    report.volume_before = cover.volume();
    report.volume_after = next.volume();
    report.semidistance_to_previous = hausdorff_semidistance(box_centers(cover), box_centers(next));
    report.seeds = seeds;
    report.blowups = blowups;
    report.total_points = hist.total_points;
    report.dropped_points = hist.dropped_points;
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    return IterationOutcome{std::move(hist), std::move(kept), std::move(next), report};
}

namespace {

template <typename E>
[[noreturn]] void rethrow_with_iteration(const E& e, std::size_t iteration)
{
    throw E("iteration " + std::to_string(iteration) + ": " + e.what());
}

} // namespace

RunResult run_algorithm(const RunConfig& config, std::span<const IterationSink> sinks)
{
    config.validate();
    const SystemDef system = config.system();
    const TimeGrid grid = config.time_grid();

    Cover cover = initial_grid(config.domain, config.initial_counts);
    std::vector<IterationReport> reports;
    reports.reserve(config.iterations);

    for (std::size_t it = 1; it <= config.iterations; ++it) {
        std::optional<IterationOutcome> outcome;
        try {
            outcome.emplace(run_iteration(system, cover, grid, it, config.workers));
        } catch (const ExtinctionError& e) {
            rethrow_with_iteration(e, it);
        } catch (const BlowupBudgetError& e) {
            rethrow_with_iteration(e, it);
        }
        for (const auto& sink : sinks) {
            sink(cover, *outcome);
        }
        reports.push_back(outcome->report);
        cover = std::move(outcome->next);
    }
    return RunResult{std::move(cover), std::move(reports)};
}

} // namespace attractor
