#include "cli/app.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <ostream>

#include "cli/bench.hpp"
#include "strictmatch/pgm.hpp"
#include "strictmatch/scenario.hpp"

namespace strictmatch::cli {

namespace {

namespace fs = std::filesystem;

const char* mode_name(CorrelationMode mode) {
    return mode == CorrelationMode::linear ? "linear" : "circular";
}

void require_path(const fs::path& path, const char* flag) {
    if (path.empty()) {
        throw std::invalid_argument(std::string(flag) + " is required");
    }
}

void validate(const RunConfig& config) {
    if (config.levels < 1) {
        throw std::invalid_argument("--levels must be at least 1");
    }
    if (!(config.fraction > 0.0 && config.fraction <= 1.0)) {
        throw std::invalid_argument("--fraction must lie in (0, 1]");
    }
    if (config.out_dir.empty()) {
        throw std::invalid_argument("--out-dir must not be empty");
    }
}

fs::path prepare_out_dir(const RunConfig& config) {
    fs::create_directories(config.out_dir);
    return config.out_dir;
}

void write_match_artifacts(const RunConfig& config, const MatchResult& result, const DetectionSet& detections) {
    const fs::path dir = prepare_out_dir(config);
    write_file(dir / "surface.pgm", write_surface(result.surface, SurfaceScaling::max255));
    if (config.surface_csv) {
        write_file(dir / "surface.csv", write_surface_csv(result.surface));
    }
    write_file(dir / "detections.csv", write_detections(detections));
}

void print_summary(std::ostream& out, const char* command, const MatchResult& result,
                   const DetectionSet& detections) {
    out << "command=" << command << " peak=" << format_number(result.peak_value) << " lag_x=" << result.peak_lag.x
        << " lag_y=" << result.peak_lag.y;
    if (result.template_mass) {
        out << " template_mass=" << *result.template_mass << " levels=" << result.levels;
    }
    out << " mode=" << mode_name(result.mode) << " detections=" << detections.detections.size() << '\n';
}

struct Inputs {
    GrayImage templ;
    GrayImage signal;
};

Inputs load_pair(const RunConfig& config) {
    require_path(config.template_path, "--template");
    require_path(config.signal_path, "--signal");
    return {read_pgm_file(config.template_path), read_pgm_file(config.signal_path)};
}

DetectionSet detect_on(const RunConfig& config, const RealSurface& surface, Extent template_extent) {
    return detect(surface, config.fraction, config.connectivity, {config.weighting, template_extent});
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const PgmError& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const EngineMismatch& e) {
        err << "error: " << e.what() << '\n';
        return kEngineMismatch;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kConstraint;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int cmd_match(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        validate(config);
        const Inputs in = load_pair(config);
        if (in.templ.depth() != in.signal.depth()) {
            err << "note: template depth " << in.templ.depth() << " and signal depth " << in.signal.depth()
                << " differ; both are read against depth " << common_depth(in.templ, in.signal) << '\n';
        }
        const MatchResult result = strict_match(in.templ, in.signal, config.levels, {config.mode, config.engine});
        if (result.levels_exceed_depth) {
            err << "warning: " << config.levels << " levels exceed gray depth "
                << common_depth(in.templ, in.signal) << "; some layers are duplicates\n";
        }
        const DetectionSet detections = detect_on(config, result.surface, in.templ.extent());
        write_match_artifacts(config, result, detections);
        print_summary(out, "match", result, detections);
        return kOk;
    });
}

int cmd_correlate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        validate(config);
        const Inputs in = load_pair(config);
        const MatchResult result = plain_correlation(in.templ, in.signal, {config.mode, config.engine});
        const DetectionSet detections = detect_on(config, result.surface, in.templ.extent());
        write_match_artifacts(config, result, detections);
        print_summary(out, "correlate", result, detections);
        return kOk;
    });
}

int cmd_decompose(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        validate(config);
        require_path(config.signal_path, "--input");
        const GrayImage image = read_pgm_file(config.signal_path);
        const QuantizationScheme scheme = make_scheme(image.depth(), config.levels);
        if (scheme.oversampled()) {
            err << "warning: " << config.levels << " levels exceed gray depth " << image.depth() << '\n';
        }
        const LayerStack stack = decompose(image, scheme);
        const fs::path dir = prepare_out_dir(config);
        for (const BinaryLayer& layer : stack.layers) {
            std::vector<std::uint32_t> px(layer.values.begin(), layer.values.end());
            for (auto& v : px) {
                v *= 255;
            }
            char name[32];
            std::snprintf(name, sizeof name, "layer_%02u.pgm", layer.index);
            write_file(dir / name,
                       write_pgm(GrayImage(layer.extent.width, layer.extent.height, 255, std::move(px))));
        }
        write_file(dir / "levels.pgm", write_pgm(level_counts(image, scheme)));
        out << "command=decompose levels=" << scheme.levels << " width=" << image.width()
            << " height=" << image.height() << " depth=" << image.depth() << '\n';
        return kOk;
    });
}

int cmd_detect(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        validate(config);
        require_path(config.surface_path, "--surface");
        const GrayImage panel = read_pgm_file(config.surface_path);
        RealSurface surface;
        surface.extent = panel.extent();
        surface.values.assign(panel.pixels().begin(), panel.pixels().end());
        if (config.origin_x >= panel.width() || config.origin_y >= panel.height()) {
            throw std::invalid_argument("--origin-x/--origin-y must lie inside the surface");
        }
        surface.origin_x = config.origin_x;
        surface.origin_y = config.origin_y;
        const DetectionSet detections =
            detect(surface, config.fraction, config.connectivity, {config.weighting, config.template_extent});
        write_file(prepare_out_dir(config) / "detections.csv", write_detections(detections));
        out << "command=detect threshold=" << format_number(detections.threshold_used)
            << " detections=" << detections.detections.size() << '\n';
        return kOk;
    });
}

int cmd_scenario(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        validate(config);
        const Scenario scene = make_fig1_scenario(config.seed, {config.dimensions, true});
        const fs::path dir = prepare_out_dir(config);
        write_file(dir / "template.pgm", write_pgm(scene.templ));
        write_file(dir / "signal.pgm", write_pgm(scene.signal));
        write_file(dir / "truth.csv", "lag_x,lag_y\n" + std::to_string(scene.true_lag.x) + ',' +
                                          std::to_string(scene.true_lag.y) + '\n');
        out << "command=scenario seed=" << config.seed << " dims=" << config.dimensions
            << " lag_x=" << scene.true_lag.x << " lag_y=" << scene.true_lag.y << '\n';
        return kOk;
    });
}

namespace {

int cmd_bench(const RunConfig& config, const BenchGrid& grid, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        validate(config);
        const std::vector<BenchRow> rows = run_bench(grid);
        write_file(prepare_out_dir(config) / "bench.csv", write_bench_csv(rows));
        double worst = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            worst = i == 0 ? rows[i].speedup() : std::min(worst, rows[i].speedup());
        }
        out << "command=bench rows=" << rows.size() << " threads=1 min_speedup=" << format_number(worst) << '\n';
        return kOk;
    });
}

template <typename T>
T parse_choice(const std::string& value, const char* flag, std::initializer_list<std::pair<const char*, T>> choices) {
    for (const auto& [name, v] : choices) {
        if (value == name) {
            return v;
        }
    }
    throw std::invalid_argument(std::string("unknown value '") + value + "' for " + flag);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Strict template matching by threshold decomposition and FFT correlation", "strictmatch"};
    app.require_subcommand(1);

    RunConfig config;
    BenchGrid grid;
    std::string mode = "linear";
    std::string engine = "fft";
    std::string weighting = "intensity";
    int connectivity = 8;
    int levels = 4;

    const auto add_pair = [&](CLI::App* cmd) {
        cmd->add_option("--template", config.template_path, "Template PGM");
        cmd->add_option("--signal", config.signal_path, "Signal PGM");
    };
    const auto add_detection = [&](CLI::App* cmd) {
        cmd->add_option("--fraction", config.fraction, "Detection threshold as a fraction of the surface maximum")
            ->capture_default_str();
        cmd->add_option("--connectivity", connectivity, "Component connectivity (4 or 8)")->capture_default_str();
        cmd->add_option("--weighting", weighting, "Centroid weighting (intensity or area)")->capture_default_str();
    };
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out-dir", config.out_dir, "Artifact directory")->capture_default_str();
    };
    const auto add_correlation = [&](CLI::App* cmd) {
        cmd->add_option("--mode", mode, "linear or circular")->capture_default_str();
        cmd->add_option("--engine", engine, "fft or naive")->capture_default_str();
        cmd->add_flag("--surface-csv", config.surface_csv, "Also write exact surface values");
    };

    CLI::App* match = app.add_subcommand("match", "Strict match of a template against a signal");
    add_pair(match);
    match->add_option("--levels", levels, "Number of threshold levels")->capture_default_str();
    add_correlation(match);
    add_detection(match);
    add_common(match);

    CLI::App* correlate = app.add_subcommand("correlate", "Plain gray-value correlation baseline");
    add_pair(correlate);
    add_correlation(correlate);
    add_detection(correlate);
    add_common(correlate);

    CLI::App* decompose_cmd = app.add_subcommand("decompose", "Write the binary threshold layers of an image");
    decompose_cmd->add_option("--input,--signal", config.signal_path, "Input PGM");
    decompose_cmd->add_option("--levels", levels, "Number of threshold levels")->capture_default_str();
    add_common(decompose_cmd);

    CLI::App* detect_cmd = app.add_subcommand("detect", "Detect components on a surface PGM");
    detect_cmd->add_option("--surface", config.surface_path, "Surface PGM");
    detect_cmd->add_option("--origin-x", config.origin_x, "Surface column of zero lag")->capture_default_str();
    detect_cmd->add_option("--origin-y", config.origin_y, "Surface row of zero lag")->capture_default_str();
    detect_cmd->add_option("--template-width", config.template_extent.width, "Template width for center coordinates")
        ->capture_default_str();
    detect_cmd->add_option("--template-height", config.template_extent.height,
                           "Template height for center coordinates")
        ->capture_default_str();
    add_detection(detect_cmd);
    add_common(detect_cmd);

    CLI::App* scenario = app.add_subcommand("scenario", "Write a synthetic discriminability scene");
    scenario->add_option("--seed", config.seed, "Scene seed")->capture_default_str();
    scenario->add_option("--dims", config.dimensions, "1 or 2")->capture_default_str();
    add_common(scenario);

    CLI::App* bench = app.add_subcommand("bench", "Time the FFT engine against the naive engine");
    bench->add_option("--signal-sizes", grid.signal_sizes, "Square signal sizes")->capture_default_str();
    bench->add_option("--template-sizes", grid.template_sizes, "Square template sizes")->capture_default_str();
    bench->add_option("--levels-grid", grid.levels, "Level counts")->capture_default_str();
    bench->add_option("--repeats", grid.repeats, "Timed runs per engine; the fastest is kept")->capture_default_str();
    bench->add_option("--seed", grid.seed, "Input seed")->capture_default_str();
    add_common(bench);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConstraint;
    }

    const int choice_status = guarded(err, [&] {
        if (levels < 1) {
            throw std::invalid_argument("--levels must be at least 1");
        }
        config.levels = static_cast<std::uint32_t>(levels);
        config.mode = parse_choice<CorrelationMode>(
            mode, "--mode", {{"linear", CorrelationMode::linear}, {"circular", CorrelationMode::circular}});
        config.engine = parse_choice<Engine>(engine, "--engine", {{"fft", Engine::fft}, {"naive", Engine::naive}});
        config.weighting = parse_choice<CentroidWeighting>(
            weighting, "--weighting", {{"intensity", CentroidWeighting::intensity}, {"area", CentroidWeighting::area}});
        if (connectivity != 4 && connectivity != 8) {
            throw std::invalid_argument("--connectivity must be 4 or 8");
        }
        config.connectivity = connectivity == 4 ? Connectivity::four : Connectivity::eight;
        if (config.template_extent.area() == 0) {
            throw std::invalid_argument("--template-width and --template-height must be positive");
        }
        if (config.dimensions != 1 && config.dimensions != 2) {
            throw std::invalid_argument("--dims must be 1 or 2");
        }
        return kOk;
    });
    if (choice_status != kOk) {
        return choice_status;
    }

    if (match->parsed()) {
        config.command = "match";
        return cmd_match(config, out, err);
    }
    if (correlate->parsed()) {
        config.command = "correlate";
        return cmd_correlate(config, out, err);
    }
    if (decompose_cmd->parsed()) {
        config.command = "decompose";
        return cmd_decompose(config, out, err);
    }
    if (detect_cmd->parsed()) {
        config.command = "detect";
        return cmd_detect(config, out, err);
    }
    if (scenario->parsed()) {
        config.command = "scenario";
        return cmd_scenario(config, out, err);
    }
    config.command = "bench";
    return cmd_bench(config, grid, out, err);
}

}  // namespace strictmatch::cli
