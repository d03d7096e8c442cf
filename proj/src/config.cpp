#include "attractor/config.hpp"

#include "attractor/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace attractor {

namespace {

namespace pt = boost::property_tree;

struct PresetEntry {
    const char* name;
    const char* description;
};

constexpr PresetEntry kPresets[] = {
    {"example1", "figure-eight system, [-1.5,1.5]^2, 30x30 cells, dt=0.01, T=20, 4 iterations"},
    {"example2", "Holling-Tanner predator-prey, (0,7)^2, 70x70 cells, dt=0.01, T=40, 5 iterations"},
    {"example3", "fluid-structure 1-mode model, (-3,3)x(-1,1)^2, 60x20x20 cells, dt=0.01, T=10, 9 iterations"},
    {"example4", "Hopf system, (-2,2)^3, 40x40x40 cells, dt=0.01, T=10, 5 iterations"},
};

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

double parse_double(std::string_view key, std::string_view raw)
{
    const std::string text = trim(raw);
    double value = 0.0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    if (!text.empty() && *begin == '+') {
        ++begin;
    }
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ValidationError(std::string(key) + ": expected a finite number, got '" + text + "'");
    }
    return value;
}

std::uint64_t parse_count(std::string_view key, std::string_view raw)
{
    const std::string text = trim(raw);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ValidationError(std::string(key) + ": expected a non-negative integer, got '" + text + "'");
    }
    return value;
}

template <typename T, typename Parse>
std::vector<T> parse_list(std::string_view key, std::string_view raw, Parse parse)
{
    std::vector<T> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = raw.find(',', start);
        out.push_back(parse(key, raw.substr(start, comma == std::string_view::npos ? raw.npos : comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

[[noreturn]] void unknown_key(std::string_view section, std::string_view key)
{
    throw ValidationError("unknown key '" + std::string(section) + "." + std::string(key) + "'");
}

std::string format_number(double v)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

template <typename T>
std::string join(const std::vector<T>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        if constexpr (std::is_floating_point_v<T>) {
            out += format_number(values[i]);
        } else {
            out += std::to_string(values[i]);
        }
    }
    return out;
}

} // namespace

std::vector<std::string> preset_names()
{
    std::vector<std::string> names;
    for (const auto& p : kPresets) {
        names.emplace_back(p.name);
    }
    return names;
}

std::string preset_description(std::string_view name)
{
    for (const auto& p : kPresets) {
        if (name == p.name) {
            return p.description;
        }
    }
    throw ValidationError("unknown preset '" + std::string(name) + "'");
}

RunConfig preset(std::string_view name)
{
    RunConfig c;
    c.preset = std::string(name);
    c.dt = 0.01;
    if (name == "example1") {
        c.system_name = "eight";
        c.params = {{"mu", 0.5}};
        c.domain = Domain::make({-1.5, -1.5}, {1.5, 1.5});
        c.initial_counts = {30, 30};
        c.horizon = 20.0;
        c.iterations = 4;
    } else if (name == "example2") {
        c.system_name = "holling-tanner";
        c.params = {{"N", 0.5}};
        c.domain = Domain::make({0.0, 0.0}, {7.0, 7.0});
        c.initial_counts = {70, 70};
        c.horizon = 40.0;
        c.iterations = 5;
    } else if (name == "example3") {
        c.system_name = "fluid-structure";
        c.params = {{"gamma", 3.0}};
        c.domain = Domain::make({-3.0, -1.0, -1.0}, {3.0, 1.0, 1.0});
        c.initial_counts = {60, 20, 20};
        c.horizon = 10.0;
        c.iterations = 9;
    } else if (name == "example4") {
        c.system_name = "hopf";
        c.params = {{"beta", -0.25}, {"mu", 4.0}, {"nu", 1.0}};
        c.domain = Domain::make({-2.0, -2.0, -2.0}, {2.0, 2.0, 2.0});
        c.initial_counts = {40, 40, 40};
        c.horizon = 10.0;
        c.iterations = 5;
    } else {
        throw ValidationError("unknown preset '" + std::string(name) + "'");
    }
    return c;
}

RunConfig parse_config(std::string_view text)
{
    pt::ptree tree;
    {
        std::istringstream in{std::string(text)};
        try {
            pt::read_ini(in, tree);
        } catch (const pt::ini_parser_error& e) {
            throw ValidationError("config line " + std::to_string(e.line()) + ": " + e.message());
        }
    }

    RunConfig c;
    bool have_name = false;
    std::optional<std::vector<double>> lo;
    std::optional<std::vector<double>> hi;
    bool have_counts = false;
    bool have_dt = false;
    bool have_horizon = false;

    if (auto p = tree.get_child_optional("preset"); p && p->empty()) {
        c = preset(trim(p->data()));
        have_name = have_counts = have_dt = have_horizon = true;
        lo = c.domain.lo;
        hi = c.domain.hi;
    }

    for (const auto& [section, body] : tree) {
        if (section == "preset" && body.empty()) {
            continue;
        }
        if (body.empty()) {
            throw ValidationError("unknown top-level key '" + section + "'");
        }
        for (const auto& [key, node] : body) {
            const std::string& value = node.data();
            if (section == "system") {
                if (key == "name") {
                    const std::string name = trim(value);
                    if (name != c.system_name) {
                        c.params.clear();
                    }
                    c.system_name = name;
                    have_name = true;
                } else if (key.rfind("params.", 0) == 0 && key.size() > 7) {
                    // Applied after the loop so that the order of keys does not matter.
                } else {
                    unknown_key(section, key);
                }
            } else if (section == "domain") {
                if (key == "lo") {
                    lo = parse_list<double>("domain.lo", value, parse_double);
                } else if (key == "hi") {
                    hi = parse_list<double>("domain.hi", value, parse_double);
                } else {
                    unknown_key(section, key);
                }
            } else if (section == "grid") {
                if (key == "counts") {
                    c.initial_counts = parse_list<std::uint64_t>("grid.counts", value, parse_count);
                    have_counts = true;
                } else {
                    unknown_key(section, key);
                }
            } else if (section == "time") {
                if (key == "dt") {
                    c.dt = parse_double("time.dt", value);
                    have_dt = true;
                } else if (key == "horizon") {
                    c.horizon = parse_double("time.horizon", value);
                    have_horizon = true;
                } else {
                    unknown_key(section, key);
                }
            } else if (section == "run") {
                if (key == "iterations") {
                    c.iterations = parse_count("run.iterations", value);
                } else if (key == "workers") {
                    c.workers = parse_count("run.workers", value);
                } else if (key == "threshold") {
                    if (trim(value) != "mean") {
                        throw ValidationError("run.threshold: only 'mean' is supported");
                    }
                    c.threshold_rule = ThresholdRule::mean;
                } else {
                    unknown_key(section, key);
                }
            } else {
                throw ValidationError("unknown section [" + section + "]");
            }
        }
    }

    if (auto sys = tree.get_child_optional("system")) {
        for (const auto& [key, node] : *sys) {
            if (key.rfind("params.", 0) == 0) {
                c.params[key.substr(7)] = parse_double("system." + key, node.data());
            }
        }
    }

    if (!have_name) {
        throw ValidationError("missing required key system.name");
    }
    if (!lo) {
        throw ValidationError("missing required key domain.lo");
    }
    if (!hi) {
        throw ValidationError("missing required key domain.hi");
    }
    if (!have_counts) {
        throw ValidationError("missing required key grid.counts");
    }
    if (!have_dt) {
        throw ValidationError("missing required key time.dt");
    }
    if (!have_horizon) {
        throw ValidationError("missing required key time.horizon");
    }
    c.domain = Domain::make(*lo, *hi);
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot read config file '" + path.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string format_config(const RunConfig& c)
{
    std::ostringstream out;
    out << "[system]\n"
        << "name = " << c.system_name << '\n';
    for (const auto& [key, value] : c.params) {
        out << "params." << key << " = " << format_number(value) << '\n';
    }
    out << "\n[domain]\n"
        << "lo = " << join(c.domain.lo) << '\n'
        << "hi = " << join(c.domain.hi) << '\n'
        << "\n[grid]\n"
        << "counts = " << join(c.initial_counts) << '\n'
        << "\n[time]\n"
        << "dt = " << format_number(c.dt) << '\n'
        << "horizon = " << format_number(c.horizon) << '\n'
        << "\n[run]\n"
        << "iterations = " << c.iterations << '\n'
        << "workers = " << c.workers << '\n';
    return out.str();
}

} // namespace attractor
