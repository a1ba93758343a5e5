#pragma once

// Gray-level rasters and their binary threshold decomposition.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace strictmatch {

struct Extent {
    std::size_t width = 0;
    std::size_t height = 0;

    std::size_t area() const { return width * height; }
    friend bool operator==(const Extent&, const Extent&) = default;
};

/// Nonnegative integer raster with a declared maximum gray level.
///
/// Pixels are stored row-major. A height of 1 encodes a 1D signal.
/// Construction rejects pixels above the declared depth instead of clamping.
class GrayImage {
public:
    GrayImage(std::size_t width, std::size_t height, std::uint32_t depth,
              std::vector<std::uint32_t> pixels);

    /// All-zero image.
    GrayImage(std::size_t width, std::size_t height, std::uint32_t depth);

    static GrayImage row(std::uint32_t depth, std::vector<std::uint32_t> pixels);

    std::size_t width() const { return extent_.width; }
    std::size_t height() const { return extent_.height; }
    Extent extent() const { return extent_; }
    std::uint32_t depth() const { return depth_; }

    std::uint32_t at(std::size_t x, std::size_t y) const { return pixels_[y * extent_.width + x]; }
    void set(std::size_t x, std::size_t y, std::uint32_t value);

    std::span<const std::uint32_t> pixels() const { return pixels_; }

    /// Same pixels declared against a different depth; throws if a pixel exceeds it.
    GrayImage with_depth(std::uint32_t depth) const;

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    Extent extent_;
    std::uint32_t depth_;
    std::vector<std::uint32_t> pixels_;
};

/// A cutoff kept as an exact rational numerator / denominator.
struct Cutoff {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;

    double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
    bool admits(std::uint32_t pixel) const {
        return static_cast<std::uint64_t>(pixel) * denominator >= numerator;
    }
};

/// The threshold ladder driving a decomposition.
///
/// For levels >= 2 the cutoffs are i * depth / levels for i = 1..levels, so
/// the top cutoff sits exactly at depth. A single level uses depth / 2, which
/// makes a depth-1 binary image decompose to itself.
struct QuantizationScheme {
    std::uint32_t levels = 0;
    std::uint32_t depth = 0;
    std::vector<Cutoff> thresholds;

    /// True when levels exceed the gray depth and some layers duplicate.
    bool oversampled() const { return levels > depth; }
};

QuantizationScheme make_scheme(std::uint32_t depth, std::uint32_t levels);

struct BinaryLayer {
    Extent extent;
    std::uint32_t index = 0;  // 1-based ordinal
    std::vector<std::uint8_t> values;
};

struct LayerStack {
    std::vector<BinaryLayer> layers;
    QuantizationScheme scheme;
};

/// Layer i marks pixels >= thresholds[i]. Requires scheme.depth == image.depth.
LayerStack decompose(const GrayImage& image, const QuantizationScheme& scheme);

/// Number of cutoffs each pixel meets, as an image of depth scheme.levels.
GrayImage level_counts(const GrayImage& image, const QuantizationScheme& scheme);

}  // namespace strictmatch
