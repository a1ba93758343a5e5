#include "strictmatch/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace strictmatch {

namespace {

void require_fits(const GrayImage& templ, const GrayImage& signal) {
    if (templ.width() > signal.width() || templ.height() > signal.height()) {
        throw std::invalid_argument("template " + std::to_string(templ.width()) + "x" +
                                    std::to_string(templ.height()) + " is larger than signal " +
                                    std::to_string(signal.width()) + "x" + std::to_string(signal.height()));
    }
}

void require_levels(std::uint32_t levels) {
    if (levels < 1) {
        throw std::invalid_argument("number of levels must be at least 1");
    }
}

// Template raster as seen by the correlator: zero-padded to the signal in
// circular mode, unchanged otherwise.
RealRaster place_template(RealRaster templ, Extent signal, CorrelationMode mode) {
    if (mode == CorrelationMode::linear || templ.extent == signal) {
        return templ;
    }
    RealRaster padded{signal, std::vector<double>(signal.area(), 0.0)};
    for (std::size_t y = 0; y < templ.extent.height; ++y) {
        std::copy_n(templ.values.begin() + static_cast<std::ptrdiff_t>(y * templ.extent.width), templ.extent.width,
                    padded.values.begin() + static_cast<std::ptrdiff_t>(y * signal.width));
    }
    return padded;
}

void fill_peak(MatchResult& result) {
    result.peak_index = argmax(result.surface);
    result.peak_value = result.surface.values[result.peak_index];
    result.peak_lag = result.surface.lag_of(result.peak_index);
}

void snap_exact(RealSurface& surface) {
    snap_to_integers(surface.values);
    for (double v : surface.values) {
        if (v != std::round(v)) {
            throw std::runtime_error("layer correlation drifted beyond the integer snap tolerance");
        }
    }
}

}  // namespace

std::size_t argmax(const RealSurface& surface) {
    if (surface.values.empty()) {
        throw std::invalid_argument("surface is empty");
    }
    // max_element returns the first maximum.
    return static_cast<std::size_t>(std::max_element(surface.values.begin(), surface.values.end()) -
                                    surface.values.begin());
}

std::uint32_t common_depth(const GrayImage& templ, const GrayImage& signal) {
    return std::max(templ.depth(), signal.depth());
}

std::uint64_t template_mass(const GrayImage& templ, const QuantizationScheme& scheme) {
    const GrayImage counts = level_counts(templ.with_depth(scheme.depth), scheme);
    const auto px = counts.pixels();
    return std::accumulate(px.begin(), px.end(), std::uint64_t{0});
}

MatchResult strict_match(const GrayImage& templ, const GrayImage& signal, std::uint32_t levels,
                         MatchOptions options) {
    require_levels(levels);
    require_fits(templ, signal);
    const QuantizationScheme scheme = make_scheme(common_depth(templ, signal), levels);
    const LayerStack t_layers = decompose(templ.with_depth(scheme.depth), scheme);
    const LayerStack s_layers = decompose(signal.with_depth(scheme.depth), scheme);

    MatchResult result;
    result.levels = levels;
    result.mode = options.mode;
    result.levels_exceed_depth = scheme.oversampled();
    result.template_mass = template_mass(templ, scheme);

    const Extent t_extent =
        options.mode == CorrelationMode::linear ? templ.extent() : signal.extent();
    if (options.engine == Engine::fft) {
        // The inverse transform is linear, so the per-layer spectra are summed
        // before a single inverse.
        SpectralCorrelator correlator(t_extent, signal.extent(), options.mode);
        for (std::size_t i = 0; i < levels; ++i) {
            const RealRaster t = place_template(to_raster(t_layers.layers[i]), signal.extent(), options.mode);
            const RealRaster s = to_raster(s_layers.layers[i]);
            correlator.accumulate(t.values, s.values);
        }
        result.surface = correlator.surface();
    } else {
        for (std::size_t i = 0; i < levels; ++i) {
            const RealRaster t = place_template(to_raster(t_layers.layers[i]), signal.extent(), options.mode);
            RealSurface layer = cross_correlate_naive(t, to_raster(s_layers.layers[i]), options.mode);
            if (i == 0) {
                result.surface = std::move(layer);
            } else {
                std::transform(result.surface.values.begin(), result.surface.values.end(), layer.values.begin(),
                               result.surface.values.begin(), std::plus<>());
            }
        }
    }
    snap_exact(result.surface);
    fill_peak(result);
    return result;
}

RealSurface min_level_oracle(const GrayImage& templ, const GrayImage& signal, std::uint32_t levels,
                             CorrelationMode mode) {
    require_levels(levels);
    require_fits(templ, signal);
    const QuantizationScheme scheme = make_scheme(common_depth(templ, signal), levels);
    const GrayImage lt = level_counts(templ.with_depth(scheme.depth), scheme);
    const GrayImage ls = level_counts(signal.with_depth(scheme.depth), scheme);

    const auto wt = static_cast<std::int64_t>(lt.width());
    const auto ht = static_cast<std::int64_t>(lt.height());
    const auto ws = static_cast<std::int64_t>(ls.width());
    const auto hs = static_cast<std::int64_t>(ls.height());

    RealSurface out;
    out.mode = mode;
    if (mode == CorrelationMode::linear) {
        out.extent = surface_extent(lt.extent(), ls.extent(), mode);
        out.origin_x = lt.width() - 1;
        out.origin_y = lt.height() - 1;
    } else {
        out.extent = ls.extent();
    }
    out.values.assign(out.extent.area(), 0.0);

    for (std::size_t index = 0; index < out.values.size(); ++index) {
        const Lag tau = out.lag_of(index);
        std::uint64_t sum = 0;
        for (std::int64_t y = 0; y < ht; ++y) {
            for (std::int64_t x = 0; x < wt; ++x) {
                std::int64_t sx = x + tau.x;
                std::int64_t sy = y + tau.y;
                if (mode == CorrelationMode::circular) {
                    sx %= ws;
                    sy %= hs;
                } else if (sx < 0 || sy < 0 || sx >= ws || sy >= hs) {
                    continue;
                }
                const auto t = lt.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
                const auto s = ls.at(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy));
                sum += std::min(t, s);
            }
        }
        out.values[index] = static_cast<double>(sum);
    }
    return out;
}

MatchResult plain_correlation(const GrayImage& templ, const GrayImage& signal, MatchOptions options) {
    require_fits(templ, signal);
    const RealRaster t = place_template(to_raster(templ), signal.extent(), options.mode);
    const RealRaster s = to_raster(signal);
    MatchResult result;
    result.mode = options.mode;
    result.surface = options.engine == Engine::fft ? cross_correlate_fft(t, s, options.mode)
                                                   : cross_correlate_naive(t, s, options.mode);
    // Integer gray inputs give integer correlations; large sums may carry
    // more rounding than the snap tolerance, in which case values stay as-is.
    snap_to_integers(result.surface.values);
    fill_peak(result);
    return result;
}

}  // namespace strictmatch
