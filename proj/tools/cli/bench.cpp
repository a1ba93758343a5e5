#include "cli/bench.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

#include "strictmatch/matcher.hpp"
#include "strictmatch/pgm.hpp"

namespace strictmatch::cli {

namespace {

GrayImage random_image(std::size_t size, std::mt19937_64& rng) {
    std::vector<std::uint32_t> px(size * size);
    for (auto& v : px) {
        v = static_cast<std::uint32_t>(rng() % 256);
    }
    return GrayImage(size, size, 255, std::move(px));
}

GrayImage crop(const GrayImage& image, std::size_t x0, std::size_t y0, std::size_t size) {
    GrayImage out(size, size, image.depth());
    for (std::size_t y = 0; y < size; ++y) {
        for (std::size_t x = 0; x < size; ++x) {
            out.set(x, y, image.at(x0 + x, y0 + y));
        }
    }
    return out;
}

template <typename F>
double best_of(unsigned repeats, F&& run) {
    double best = 0.0;
    for (unsigned i = 0; i < std::max(1u, repeats); ++i) {
        const auto start = std::chrono::steady_clock::now();
        run();
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        best = i == 0 ? elapsed.count() : std::min(best, elapsed.count());
    }
    return best;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchGrid& grid) {
    std::vector<BenchRow> rows;
    std::mt19937_64 rng(grid.seed);
    for (const std::size_t s : grid.signal_sizes) {
        for (const std::size_t t : grid.template_sizes) {
            if (t > s) {
                continue;
            }
            const GrayImage signal = random_image(s, rng);
            const GrayImage templ = crop(signal, rng() % (s - t + 1), rng() % (s - t + 1), t);
            for (const std::uint32_t g : grid.levels) {
                const MatchOptions fft{CorrelationMode::linear, Engine::fft};
                const MatchOptions naive{CorrelationMode::linear, Engine::naive};
                const MatchResult a = strict_match(templ, signal, g, fft);
                const MatchResult b = strict_match(templ, signal, g, naive);
                if (a.surface.values != b.surface.values) {
                    std::ostringstream msg;
                    msg << "engines disagree at signal " << s << ", template " << t << ", levels " << g;
                    throw EngineMismatch(msg.str());
                }
                BenchRow row{s, t, g, 1, 0.0, 0.0};
                row.fft_seconds = best_of(grid.repeats, [&] { (void)strict_match(templ, signal, g, fft); });
                row.naive_seconds = best_of(grid.repeats, [&] { (void)strict_match(templ, signal, g, naive); });
                rows.push_back(row);
            }
        }
    }
    return rows;
}

std::string write_bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "signal_size,template_size,levels,threads,fft_seconds,naive_seconds,speedup\n";
    for (const BenchRow& r : rows) {
        out += std::to_string(r.signal_size) + ',' + std::to_string(r.template_size) + ',' +
               std::to_string(r.levels) + ',' + std::to_string(r.threads) + ',' + format_number(r.fft_seconds) +
               ',' + format_number(r.naive_seconds) + ',' + format_number(r.speedup()) + '\n';
    }
    return out;
}

}  // namespace strictmatch::cli
