#include "attractor/export.hpp"

#include "attractor/error.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace attractor {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::vector<ExportRecord> make_records(const Cover& cover, const HitHistogram& hist, std::span<const BoxId> kept,
                                       std::size_t iteration)
{
    if (hist.counts.size() != cover.size()) {
        throw ValidationError("histogram was not built against this cover");
    }
    std::vector<bool> is_kept(cover.size(), false);
    for (BoxId id : kept) {
        is_kept.at(id) = true;
    }
    std::vector<ExportRecord> out;
    out.reserve(cover.size());
    State width(cover.dim());
    for (std::size_t k = 0; k < cover.dim(); ++k) {
        width[k] = cover.width(k);
    }
    for (BoxId id = 0; id < cover.size(); ++id) {
        out.push_back({iteration, cover.depth(), cover.index(id), cover.box_lo(id), width, hist.counts[id],
                       is_kept[id]});
    }
    return out;
}

std::string cover_csv(const Cover& cover, const HitHistogram& hist, std::span<const BoxId> kept,
                      std::size_t iteration)
{
    const std::size_t n = cover.dim();
    std::string out = "iter,depth";
    for (const char* prefix : {"idx", "lo", "w"}) {
        for (std::size_t k = 0; k < n; ++k) {
            out += ',';
            out += prefix;
            out += std::to_string(k);
        }
    }
    out += ",count,kept\n";

    for (const auto& r : make_records(cover, hist, kept, iteration)) {
        out += std::to_string(r.iteration);
        out += ',';
        out += std::to_string(r.depth);
        for (std::size_t k = 0; k < n; ++k) {
            out += ',';
            out += std::to_string(r.idx[k]);
        }
        for (std::size_t k = 0; k < n; ++k) {
            out += ',';
            out += format_double(r.lo[k]);
        }
        for (std::size_t k = 0; k < n; ++k) {
            out += ',';
            out += format_double(r.width[k]);
        }
        out += ',';
        out += std::to_string(r.count);
        out += r.kept ? ",1\n" : ",0\n";
    }
    return out;
}

json report_json(const IterationReport& r)
{
    json j = {
        {"iteration", r.iteration},
        {"depth", r.depth},
        {"boxes_before", r.boxes_before},
        {"boxes_kept", r.boxes_kept},
        {"boxes_after", r.boxes_after},
        {"epsilon", r.epsilon},
        {"volume_before", r.volume_before},
        {"volume_after", r.volume_after},
        {"seeds", r.seeds},
        {"blowups", r.blowups},
        {"total_points", r.total_points},
        {"dropped_points", r.dropped_points},
        {"wall_time", r.wall_time},
    };
    j["semidistance_to_previous"] =
        r.semidistance_to_previous ? json(*r.semidistance_to_previous) : json(nullptr);
    return j;
}

IterationReport report_from_json(const json& j)
{
    IterationReport r;
    r.iteration = j.at("iteration").get<std::size_t>();
    r.depth = j.at("depth").get<std::size_t>();
    r.boxes_before = j.at("boxes_before").get<std::size_t>();
    r.boxes_kept = j.at("boxes_kept").get<std::size_t>();
    r.boxes_after = j.at("boxes_after").get<std::size_t>();
    r.epsilon = j.at("epsilon").get<double>();
    r.volume_before = j.at("volume_before").get<double>();
    r.volume_after = j.at("volume_after").get<double>();
    r.seeds = j.at("seeds").get<std::size_t>();
    r.blowups = j.at("blowups").get<std::size_t>();
    r.total_points = j.at("total_points").get<std::uint64_t>();
    r.dropped_points = j.at("dropped_points").get<std::uint64_t>();
    r.wall_time = j.at("wall_time").get<double>();
    if (const auto& sd = j.at("semidistance_to_previous"); !sd.is_null()) {
        r.semidistance_to_previous = sd.get<double>();
    }
    return r;
}

namespace {

fs::path sidecar_path(const fs::path& csv)
{
    fs::path p = csv;
    return p.replace_extension(".json");
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
    }
    out << content;
    out.close();
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) {
            return fields;
        }
        start = comma + 1;
    }
}

std::uint64_t to_u64(const std::string& s, const fs::path& path, std::size_t line)
{
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || errno != 0 || s.front() == '-') {
        throw IoError(path.string() + ":" + std::to_string(line) + ": bad integer '" + s + "'");
    }
    return v;
}

double to_double(const std::string& s, const fs::path& path, std::size_t line)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') {
        throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

} // namespace

void export_cover(const fs::path& path, const Cover& cover, const HitHistogram& hist, std::span<const BoxId> kept,
                  const IterationReport& report)
{
    write_file(path, cover_csv(cover, hist, kept, report.iteration));

    json records = json::array();
    for (const auto& r : make_records(cover, hist, kept, report.iteration)) {
        records.push_back({
            {"idx", std::vector<std::uint64_t>(r.idx.begin(), r.idx.begin() + cover.dim())},
            {"lo", r.lo},
            {"width", r.width},
            {"count", r.count},
            {"kept", r.kept},
        });
    }
    json doc = {
        {"iteration", report.iteration},
        {"depth", cover.depth()},
        {"domain", {{"lo", cover.domain().lo}, {"hi", cover.domain().hi}}},
        {"grid", {{"counts", cover.grid().counts}, {"widths", cover.grid().widths}}},
        {"histogram", {{"total_points", hist.total_points}, {"dropped_points", hist.dropped_points}}},
        {"report", report_json(report)},
        {"records", std::move(records)},
    };
    write_file(sidecar_path(path), doc.dump(1) + "\n");
}

ImportedCover import_cover(const fs::path& path)
{
    json meta;
    try {
        meta = json::parse(read_file(sidecar_path(path)));
    } catch (const json::exception& e) {
        throw IoError("bad sidecar for '" + path.string() + "': " + e.what());
    }

    Domain domain;
    GridSpec grid;
    std::size_t depth = 0;
    std::size_t iteration = 0;
    HitHistogram hist;
    std::optional<IterationReport> report;
    try {
        domain = Domain::make(meta.at("domain").at("lo").get<std::vector<double>>(),
                              meta.at("domain").at("hi").get<std::vector<double>>());
        grid = GridSpec::make(domain, meta.at("grid").at("counts").get<std::vector<std::uint64_t>>());
        depth = meta.at("depth").get<std::size_t>();
        iteration = meta.at("iteration").get<std::size_t>();
        hist.total_points = meta.at("histogram").at("total_points").get<std::uint64_t>();
        hist.dropped_points = meta.at("histogram").at("dropped_points").get<std::uint64_t>();
        if (meta.contains("report")) {
            report = report_from_json(meta.at("report"));
        }
    } catch (const json::exception& e) {
        throw IoError("bad sidecar for '" + path.string() + "': " + e.what());
    }
    const std::size_t n = domain.dim();

    std::istringstream csv(read_file(path));
    std::string line;
    if (!std::getline(csv, line)) {
        throw IoError("'" + path.string() + "' is empty");
    }
    const std::size_t columns = 2 + 3 * n + 2;
    if (split_csv_line(line).size() != columns) {
        throw IoError("'" + path.string() + "' header does not match a " + std::to_string(n) + "-d cover");
    }

    struct Row {
        BoxIndex idx{};
        State lo;
        State width;
        std::uint64_t count = 0;
        bool kept = false;
    };
    std::vector<Row> rows;
    std::size_t line_no = 1;
    while (std::getline(csv, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != columns) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                          " fields");
        }
        if (to_u64(f[0], path, line_no) != iteration || to_u64(f[1], path, line_no) != depth) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": iteration/depth disagree with sidecar");
        }
        Row row;
        for (std::size_t k = 0; k < n; ++k) {
            row.idx[k] = to_u64(f[2 + k], path, line_no);
            row.lo.push_back(to_double(f[2 + n + k], path, line_no));
            row.width.push_back(to_double(f[2 + 2 * n + k], path, line_no));
        }
        row.count = to_u64(f[2 + 3 * n], path, line_no);
        const std::string& kept = f[3 + 3 * n];
        if (kept != "0" && kept != "1") {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": kept must be 0 or 1");
        }
        row.kept = kept == "1";
        rows.push_back(std::move(row));
    }

    std::vector<BoxIndex> boxes;
    boxes.reserve(rows.size());
    for (const auto& r : rows) {
        boxes.push_back(r.idx);
    }
    Cover cover(std::move(domain), std::move(grid), depth, std::move(boxes));

    hist.counts.assign(cover.size(), 0);
    std::vector<BoxId> kept;
    for (const auto& r : rows) {
        const BoxId id = *cover.find(r.idx);
        if (r.lo != cover.box_lo(id)) {
            throw IoError("'" + path.string() + "': stored corner does not match the box index");
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (r.width[k] != cover.width(k)) {
                throw IoError("'" + path.string() + "': stored width does not match the depth");
            }
        }
        hist.counts[id] = r.count;
        if (r.kept) {
            kept.push_back(id);
        }
    }
    std::sort(kept.begin(), kept.end());
    if (hist.located_points() + hist.dropped_points != hist.total_points) {
        throw IoError("'" + path.string() + "': counts do not add up to the recorded total");
    }
    return ImportedCover{std::move(cover), std::move(hist), std::move(kept), iteration, report};
}

} // namespace attractor
