#pragma once

// Strict (threshold-decomposed) matching and the plain correlation baseline.

#include <cstdint>
#include <optional>

#include "strictmatch/image.hpp"
#include "strictmatch/spectral.hpp"

namespace strictmatch {

enum class Engine { fft, naive };

struct MatchOptions {
    CorrelationMode mode = CorrelationMode::linear;
    Engine engine = Engine::fft;
};

struct MatchResult {
    RealSurface surface;
    std::uint32_t levels = 0;  // 0 for plain correlation
    CorrelationMode mode = CorrelationMode::linear;
    double peak_value = 0.0;
    Lag peak_lag;
    std::size_t peak_index = 0;
    std::optional<std::uint64_t> template_mass;  // strict mode only
    bool levels_exceed_depth = false;
};

/// Index of the largest value; ties resolve to the smallest row-major index.
std::size_t argmax(const RealSurface& surface);

/// Depth both images are interpreted against: the larger declared depth.
std::uint32_t common_depth(const GrayImage& templ, const GrayImage& signal);

/// Sum of the template's level counts; the strict score of a perfect match.
std::uint64_t template_mass(const GrayImage& templ, const QuantizationScheme& scheme);

/// Global strict match: sum over layers of cross_correlate(t_i, s_i).
///
/// Both images are decomposed with one scheme built at common_depth(). In
/// circular mode the template is zero-padded to the signal extent. Values are
/// snapped to integers; a residue above the snap tolerance throws.
MatchResult strict_match(const GrayImage& templ, const GrayImage& signal, std::uint32_t levels,
                         MatchOptions options = {});

/// Direct summation of min(L_t(x), L_s(x + tau)) over level-count rasters.
RealSurface min_level_oracle(const GrayImage& templ, const GrayImage& signal, std::uint32_t levels,
                             CorrelationMode mode = CorrelationMode::linear);

/// Raw bilinear correlation of gray values.
MatchResult plain_correlation(const GrayImage& templ, const GrayImage& signal, MatchOptions options = {});

}  // namespace strictmatch
