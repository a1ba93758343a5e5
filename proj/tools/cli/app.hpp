#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "strictmatch/detect.hpp"
#include "strictmatch/matcher.hpp"

namespace strictmatch::cli {

enum ExitCode : int {
    kOk = 0,
    kBadInput = 2,       // unreadable or malformed input files
    kConstraint = 3,     // precondition violated (sizes, levels, fraction, ...)
    kEngineMismatch = 4, // bench engines disagree
};

struct RunConfig {
    std::string command;
    std::filesystem::path template_path;
    std::filesystem::path signal_path;
    std::filesystem::path surface_path;
    std::filesystem::path out_dir = "out";
    std::uint32_t levels = 4;
    double fraction = 0.5;
    CorrelationMode mode = CorrelationMode::linear;
    Connectivity connectivity = Connectivity::eight;
    CentroidWeighting weighting = CentroidWeighting::intensity;
    Engine engine = Engine::fft;
    std::uint64_t seed = 0;
    int dimensions = 1;
    bool surface_csv = false;
    // detect: lag-space geometry of a surface read back from a PGM panel.
    std::size_t origin_x = 0;
    std::size_t origin_y = 0;
    Extent template_extent{1, 1};
};

/// Runs the command line `args` (program name excluded). Artifacts go to the
/// configured output directory; `out` receives the one-line summary and
/// `err` any diagnostics. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_match(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_correlate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_decompose(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_detect(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_scenario(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace strictmatch::cli
