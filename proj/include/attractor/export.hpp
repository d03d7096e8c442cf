#pragma once

#include "attractor/cover.hpp"
#include "attractor/density.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace attractor {

/// One CSV row: a box of the filtered cover with its hit count and verdict.
struct ExportRecord {
    std::size_t iteration = 0;
    std::size_t depth = 0;
    BoxIndex idx{};
    State lo;
    State width;
    std::uint64_t count = 0;
    bool kept = false;
};

std::vector<ExportRecord> make_records(const Cover& cover, const HitHistogram& hist, std::span<const BoxId> kept,
                                       std::size_t iteration);

/// 17 significant digits, enough to read back the identical double.
std::string format_double(double value);

/// `iter,depth,idx0..,lo0..,w0..,count,kept`, rows in canonical index order.
std::string cover_csv(const Cover& cover, const HitHistogram& hist, std::span<const BoxId> kept,
                      std::size_t iteration);

nlohmann::json report_json(const IterationReport& report);
IterationReport report_from_json(const nlohmann::json& j);

/// Writes `path` (CSV) and the sibling `.json` sidecar holding the domain,
/// grid, the same records and the iteration report.
void export_cover(const std::filesystem::path& path, const Cover& cover, const HitHistogram& hist,
                  std::span<const BoxId> kept, const IterationReport& report);

struct ImportedCover {
    Cover cover;
    HitHistogram hist;
    std::vector<BoxId> kept;
    std::size_t iteration = 0;
    std::optional<IterationReport> report;
};

/// Reads a CSV written by export_cover plus its sidecar. The rows must agree
/// with the sidecar's domain and grid bit for bit.
ImportedCover import_cover(const std::filesystem::path& path);

} // namespace attractor
