#include "strictmatch/image.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace strictmatch {

GrayImage::GrayImage(std::size_t width, std::size_t height, std::uint32_t depth,
                     std::vector<std::uint32_t> pixels)
    : extent_{width, height}, depth_(depth), pixels_(std::move(pixels)) {
    if (width == 0 || height == 0) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    if (depth == 0) {
        throw std::invalid_argument("image depth must be at least 1");
    }
    if (pixels_.size() != extent_.area()) {
        throw std::invalid_argument("pixel count " + std::to_string(pixels_.size()) +
                                    " does not match " + std::to_string(width) + "x" +
                                    std::to_string(height));
    }
    const auto hi = std::max_element(pixels_.begin(), pixels_.end());
    if (*hi > depth_) {
        throw std::invalid_argument("pixel value " + std::to_string(*hi) + " exceeds depth " +
                                    std::to_string(depth_));
    }
}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::uint32_t depth)
    : GrayImage(width, height, depth, std::vector<std::uint32_t>(width * height, 0)) {}

GrayImage GrayImage::row(std::uint32_t depth, std::vector<std::uint32_t> pixels) {
    const auto n = pixels.size();
    return GrayImage(n, 1, depth, std::move(pixels));
}

void GrayImage::set(std::size_t x, std::size_t y, std::uint32_t value) {
    if (value > depth_) {
        throw std::invalid_argument("pixel value " + std::to_string(value) + " exceeds depth " +
                                    std::to_string(depth_));
    }
    pixels_.at(y * extent_.width + x) = value;
}

GrayImage GrayImage::with_depth(std::uint32_t depth) const {
    return GrayImage(extent_.width, extent_.height, depth, pixels_);
}

QuantizationScheme make_scheme(std::uint32_t depth, std::uint32_t levels) {
    if (depth == 0) {
        throw std::invalid_argument("gray depth must be at least 1");
    }
    if (levels == 0) {
        throw std::invalid_argument("number of levels must be at least 1");
    }
    QuantizationScheme scheme{levels, depth, {}};
    if (levels == 1) {
        scheme.thresholds.push_back({depth, 2});
        return scheme;
    }
    scheme.thresholds.reserve(levels);
    for (std::uint32_t i = 1; i <= levels; ++i) {
        scheme.thresholds.push_back({static_cast<std::uint64_t>(i) * depth, levels});
    }
    return scheme;
}

namespace {

void require_matching_depth(const GrayImage& image, const QuantizationScheme& scheme) {
    if (image.depth() != scheme.depth) {
        throw std::invalid_argument("image depth " + std::to_string(image.depth()) +
                                    " does not match scheme depth " +
                                    std::to_string(scheme.depth));
    }
    if (scheme.thresholds.size() != scheme.levels) {
        throw std::invalid_argument("scheme threshold count does not match its level count");
    }
}

}  // namespace

LayerStack decompose(const GrayImage& image, const QuantizationScheme& scheme) {
    require_matching_depth(image, scheme);
    LayerStack stack{{}, scheme};
    stack.layers.reserve(scheme.levels);
    const auto pixels = image.pixels();
    for (std::uint32_t i = 0; i < scheme.levels; ++i) {
        const Cutoff cut = scheme.thresholds[i];
        BinaryLayer layer{image.extent(), i + 1, std::vector<std::uint8_t>(pixels.size())};
        std::transform(pixels.begin(), pixels.end(), layer.values.begin(),
                       [cut](std::uint32_t p) { return static_cast<std::uint8_t>(cut.admits(p)); });
        stack.layers.push_back(std::move(layer));
    }
    return stack;
}

GrayImage level_counts(const GrayImage& image, const QuantizationScheme& scheme) {
    require_matching_depth(image, scheme);
    const auto pixels = image.pixels();
    std::vector<std::uint32_t> counts(pixels.size());
    // Cutoffs are increasing, so the count is the length of the admitted prefix.
    std::transform(pixels.begin(), pixels.end(), counts.begin(), [&](std::uint32_t p) {
        const auto it = std::partition_point(scheme.thresholds.begin(), scheme.thresholds.end(),
                                             [p](const Cutoff& c) { return c.admits(p); });
        return static_cast<std::uint32_t>(it - scheme.thresholds.begin());
    });
    return GrayImage(image.width(), image.height(), scheme.levels, std::move(counts));
}

}  // namespace strictmatch
