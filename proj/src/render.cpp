#include "attractor/render.hpp"

#include "attractor/error.hpp"

#include <charconv>
#include <fstream>

namespace attractor {

namespace fs = std::filesystem;

namespace {

std::string num(double v)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string xml_escape(const std::string& s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string label_for(const RenderSpec& spec, std::size_t axis)
{
    return axis < spec.axis_labels.size() ? spec.axis_labels[axis] : "x" + std::to_string(axis);
}

} // namespace

std::string svg_document(const Cover& cover, std::span<const BoxId> kept, std::array<std::size_t, 2> axes,
                         const RenderSpec& spec)
{
    const auto [ax, ay] = axes;
    if (cover.dim() < 2) {
        throw ValidationError("rendering needs a cover of dimension >= 2");
    }
    if (ax == ay || ax >= cover.dim() || ay >= cover.dim()) {
        throw ValidationError("projection axes must be distinct and below the dimension");
    }
    if (spec.size_px <= 0 || spec.margin_px < 0) {
        throw ValidationError("render size must be positive");
    }

    const Domain& d = cover.domain();
    const double size = spec.size_px;
    const double sx = size / (d.hi[ax] - d.lo[ax]);
    const double sy = size / (d.hi[ay] - d.lo[ay]);
    const double wx = cover.width(ax) * sx;
    const double wy = cover.width(ay) * sy;
    const int total = spec.size_px + 2 * spec.margin_px;

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(total) +
           "\" height=\"" + std::to_string(total) + "\" viewBox=\"0 0 " + std::to_string(total) + " " +
           std::to_string(total) + "\">\n";
    out += "<g transform=\"translate(" + std::to_string(spec.margin_px) + "," + std::to_string(spec.margin_px) +
           ")\">\n";
    out += "<g fill=\"" + xml_escape(spec.fill) + "\" fill-opacity=\"" + num(spec.fill_opacity) +
           "\" stroke=\"none\">\n";
    for (BoxId id : kept) {
        const BoxIndex& idx = cover.index(id);
        const double x0 = cover.corner(ax, idx[ax]);
        const double y1 = cover.corner(ay, idx[ay] + 1);
        const double px = (x0 - d.lo[ax]) * sx;
        const double py = size - (y1 - d.lo[ay]) * sy;
        out += "<rect x=\"" + num(px) + "\" y=\"" + num(py) + "\" width=\"" + num(wx) + "\" height=\"" + num(wy) +
               "\"/>\n";
    }
    out += "</g>\n";

    if (spec.frame) {
        const std::string s = num(size);
        out += "<path d=\"M0 0 H" + s + " V" + s + " H0 Z\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
        out += "<g font-family=\"sans-serif\" font-size=\"14\" fill=\"black\">\n";
        out += "<text x=\"0\" y=\"" + num(size + 20) + "\" text-anchor=\"start\">" + num(d.lo[ax]) + "</text>\n";
        out += "<text x=\"" + s + "\" y=\"" + num(size + 20) + "\" text-anchor=\"end\">" + num(d.hi[ax]) +
               "</text>\n";
        out += "<text x=\"-6\" y=\"" + s + "\" text-anchor=\"end\">" + num(d.lo[ay]) + "</text>\n";
        out += "<text x=\"-6\" y=\"14\" text-anchor=\"end\">" + num(d.hi[ay]) + "</text>\n";
        out += "<text x=\"" + num(size / 2) + "\" y=\"" + num(size + 40) + "\" text-anchor=\"middle\">" +
               xml_escape(label_for(spec, ax)) + "</text>\n";
        out += "<text x=\"-30\" y=\"" + num(size / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 -30 " +
               num(size / 2) + ")\">" + xml_escape(label_for(spec, ay)) + "</text>\n";
        out += "</g>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
}

std::vector<fs::path> render_svg(const Cover& cover, std::span<const BoxId> kept, const RenderSpec& spec,
                                 const fs::path& path)
{
    std::vector<std::pair<std::array<std::size_t, 2>, fs::path>> jobs;
    if (spec.axes) {
        jobs.emplace_back(*spec.axes, path);
    } else if (cover.dim() == 2) {
        jobs.emplace_back(std::array<std::size_t, 2>{0, 1}, path);
    } else if (cover.dim() == 3) {
        const fs::path dir = path.parent_path();
        const std::string stem = path.stem().string();
        const std::string ext = path.has_extension() ? path.extension().string() : ".svg";
        jobs.emplace_back(std::array<std::size_t, 2>{0, 1}, dir / (stem + "_xy" + ext));
        jobs.emplace_back(std::array<std::size_t, 2>{0, 2}, dir / (stem + "_xz" + ext));
        jobs.emplace_back(std::array<std::size_t, 2>{1, 2}, dir / (stem + "_yz" + ext));
    } else {
        throw ValidationError("rendering needs a 2D or 3D cover");
    }

    std::vector<fs::path> written;
    for (const auto& [axes, file] : jobs) {
        const std::string doc = svg_document(cover, kept, axes, spec);
        std::ofstream out(file, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open '" + file.string() + "' for writing");
        }
        out << doc;
        if (!out) {
            throw IoError("failed writing '" + file.string() + "'");
        }
        written.push_back(file);
    }
    return written;
}

} // namespace attractor
