#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace strictmatch::cli {

/// FFT and naive engines produced different surfaces.
class EngineMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BenchGrid {
    std::vector<std::size_t> signal_sizes{64, 128, 256, 512};
    std::vector<std::size_t> template_sizes{8, 16, 32};
    std::vector<std::uint32_t> levels{4, 8, 16};
    unsigned repeats = 1;
    std::uint64_t seed = 0;
};

struct BenchRow {
    std::size_t signal_size = 0;
    std::size_t template_size = 0;
    std::uint32_t levels = 0;
    unsigned threads = 1;
    double fft_seconds = 0.0;
    double naive_seconds = 0.0;

    double speedup() const { return fft_seconds > 0.0 ? naive_seconds / fft_seconds : 0.0; }
};

/// Times strict matching with both engines over the grid, one row per
/// (signal size, template size, levels). Each cell first checks that the
/// engines agree exactly and throws EngineMismatch if not.
std::vector<BenchRow> run_bench(const BenchGrid& grid);

std::string write_bench_csv(const std::vector<BenchRow>& rows);

}  // namespace strictmatch::cli
