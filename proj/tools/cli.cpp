#include "cli.hpp"

#include "attractor/config.hpp"
#include "attractor/demo.hpp"
#include "attractor/error.hpp"
#include "attractor/export.hpp"
#include "attractor/render.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

namespace attractor::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kDefaultOutDir = "attractor_out";

fs::path output_dir(const std::string& flag)
{
    if (!flag.empty()) {
        return flag;
    }
    if (const char* env = std::getenv("ATTRACTOR_COVER_OUT"); env != nullptr && *env != '\0') {
        return env;
    }
    return kDefaultOutDir;
}

std::vector<std::string> axis_labels(const std::string& system)
{
    if (system == "eight") {
        return {"q", "p"};
    }
    return {"x", "y", "z"};
}

nlohmann::json config_json(const RunConfig& c)
{
    return {
        {"preset", c.preset},
        {"system", {{"name", c.system_name}, {"params", c.params}}},
        {"domain", {{"lo", c.domain.lo}, {"hi", c.domain.hi}}},
        {"grid", {{"counts", c.initial_counts}}},
        {"time", {{"dt", c.dt}, {"horizon", c.horizon}}},
        {"run", {{"iterations", c.iterations}, {"workers", c.workers}, {"threshold", "mean"}}},
    };
}

struct RunOptions {
    std::string config;
    std::string preset;
    std::string out;
    std::optional<std::size_t> iterations;
    std::optional<std::size_t> workers;
};

int do_run(const RunOptions& opt, std::ostream& out, std::ostream& err)
{
    RunConfig config;
    try {
        if (!opt.config.empty() && !opt.preset.empty()) {
            throw ValidationError("use either --config or --preset, not both");
        }
        if (!opt.config.empty()) {
            config = load_config(opt.config);
        } else if (!opt.preset.empty()) {
            config = preset(opt.preset);
        } else {
            throw ValidationError("run needs --config <file> or --preset <name>");
        }
        if (opt.iterations) {
            config.iterations = *opt.iterations;
        }
        if (opt.workers) {
            config.workers = *opt.workers;
        }
        config.validate();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    const fs::path dir = output_dir(opt.out);
    try {
        fs::create_directories(dir);
    } catch (const fs::filesystem_error& e) {
        err << "error: cannot create output directory '" << dir.string() << "': " << e.what() << '\n';
        return kExitRuntime;
    }

    RenderSpec render;
    render.axis_labels = axis_labels(config.system_name);
    std::vector<std::string> files;

    IterationSink sink = [&](const Cover& filtered, const IterationOutcome& o) {
        const auto& r = o.report;
        const std::string stem = "cover_" + std::to_string(r.iteration);
        export_cover(dir / (stem + ".csv"), filtered, o.hist, o.kept, r);
        files.push_back(stem + ".csv");
        files.push_back(stem + ".json");
        for (const auto& svg : render_svg(filtered, o.kept, render, dir / (stem + ".svg"))) {
            files.push_back(svg.filename().string());
        }
        char line[256];
        std::snprintf(line, sizeof line,
                      "iteration %zu: depth %zu, %zu boxes, eps %.3f, kept %zu -> %zu boxes, volume %.6g, "
                      "dropped %llu, blowups %zu, %.2fs",
                      r.iteration, r.depth, r.boxes_before, r.epsilon, r.boxes_kept, r.boxes_after, r.volume_after,
                      static_cast<unsigned long long>(r.dropped_points), r.blowups, r.wall_time);
        err << line << std::endl;
    };

    const auto started = std::chrono::steady_clock::now();
    RunResult result{initial_grid(config.domain, config.initial_counts), {}};
    try {
        result = run_algorithm(config, std::span<const IterationSink>(&sink, 1));
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    nlohmann::json reports = nlohmann::json::array();
    for (const auto& r : result.reports) {
        reports.push_back(report_json(r));
    }
    const nlohmann::json summary = {
        {"config", config_json(config)},
        {"iterations", reports},
        {"final_cover",
         {{"depth", result.final_cover.depth()},
          {"boxes", result.final_cover.size()},
          {"volume", result.final_cover.volume()}}},
        {"files", files},
        {"wall_time", elapsed},
    };
    try {
        std::ofstream f(dir / "summary.json");
        if (!f) {
            throw IoError("cannot write '" + (dir / "summary.json").string() + "'");
        }
        f << summary.dump(2) << '\n';
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    out << (dir / "summary.json").string() << '\n';
    return kExitOk;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Density-based box covers of attractors of ODE systems", "attractor-cover"};
    app.require_subcommand(1);

    RunOptions run_opts;
    std::size_t iterations = 0;
    std::size_t workers = 0;
    auto* run = app.add_subcommand("run", "Run the subdivision algorithm and export every iteration");
    run->add_option("--config", run_opts.config, "INI config file")->check(CLI::ExistingFile);
    run->add_option("--preset", run_opts.preset, "Built-in preset name (see `presets`)");
    run->add_option("--out", run_opts.out, "Output directory (default: $ATTRACTOR_COVER_OUT or ./attractor_out)");
    auto* it_opt = run->add_option("--iterations", iterations, "Override run.iterations")->check(CLI::PositiveNumber);
    auto* w_opt = run->add_option("--workers", workers, "Override run.workers")->check(CLI::PositiveNumber);

    auto* demo = app.add_subcommand("demo", "Demonstrations");
    demo->require_subcommand(1);
    double mu = 0.5;
    std::vector<double> x0 = {0.3, 0.0};
    double dt_coarse = 0.1;
    double dt_fine = 1e-3;
    double horizon = 200.0;
    auto* sep = demo->add_subcommand("separatrix", "Count spurious separatrix crossings of one long trajectory");
    sep->add_option("--mu", mu, "Dissipation strength")->capture_default_str();
    sep->add_option("--x0", x0, "Start point q p")->expected(2)->capture_default_str();
    sep->add_option("--dt-coarse", dt_coarse, "Coarse step")->capture_default_str();
    sep->add_option("--dt-fine", dt_fine, "Fine step")->capture_default_str();
    sep->add_option("--horizon", horizon, "Integration time")->capture_default_str();

    auto* presets = app.add_subcommand("presets", "List built-in presets, or print one as a config file");
    std::string preset_name;
    presets->add_option("name", preset_name, "Preset to print");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return kExitValidation;
    }

    if (run->parsed()) {
        if (it_opt->count() > 0) {
            run_opts.iterations = iterations;
        }
        if (w_opt->count() > 0) {
            run_opts.workers = workers;
        }
        return do_run(run_opts, out, err);
    }

    if (sep->parsed()) {
        try {
            const auto report = separatrix_demo(mu, {x0[0], x0[1]}, dt_coarse, dt_fine, horizon);
            out << to_json(report).dump(2) << '\n';
        } catch (const ValidationError& e) {
            err << "error: " << e.what() << '\n';
            return kExitValidation;
        } catch (const Error& e) {
            err << "error: " << e.what() << '\n';
            return kExitRuntime;
        }
        return kExitOk;
    }

    if (presets->parsed()) {
        if (preset_name.empty()) {
            for (const auto& name : preset_names()) {
                out << name << "  " << preset_description(name) << '\n';
            }
            return kExitOk;
        }
        try {
            out << format_config(preset(preset_name));
        } catch (const Error& e) {
            err << "error: " << e.what() << '\n';
            return kExitValidation;
        }
        return kExitOk;
    }
    return kExitValidation;
}

} // namespace attractor::cli
