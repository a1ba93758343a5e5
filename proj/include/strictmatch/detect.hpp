#pragma once

// Match surface -> threshold -> connected components -> centers of mass.

#include <cstdint>
#include <vector>

#include "strictmatch/image.hpp"
#include "strictmatch/spectral.hpp"

namespace strictmatch {

struct BinaryMask {
    Extent extent;
    std::vector<std::uint8_t> values;
};

enum class Connectivity { four = 4, eight = 8 };

struct Labeling {
    Extent extent;
    std::vector<std::uint32_t> labels;  // 0 = background, components 1..count
    std::uint32_t count = 0;
};

enum class CentroidWeighting { intensity, area };

struct CentroidOptions {
    CentroidWeighting weighting = CentroidWeighting::intensity;
    /// Template extent, used to report the template center next to its anchor.
    Extent template_extent{1, 1};
};

struct Detection {
    std::uint32_t id = 0;
    // Signal-space position of the template's top-left pixel.
    double anchor_x = 0.0;
    double anchor_y = 0.0;
    // Same position shifted to the template center.
    double center_x = 0.0;
    double center_y = 0.0;
    std::size_t area = 0;
    double mass = 0.0;
    double peak = 0.0;
};

struct DetectionSet {
    std::vector<Detection> detections;
    double threshold_used = 0.0;
    Connectivity connectivity = Connectivity::eight;
};

/// Marks values >= fraction * max(surface). A surface whose maximum is not
/// positive yields an empty mask. fraction must lie in (0, 1].
BinaryMask threshold_surface(const RealSurface& surface, double fraction);

/// Threshold level threshold_surface() would use.
double threshold_level(const RealSurface& surface, double fraction);

/// Dense labels numbered in row-major order of each component's first pixel.
Labeling label_components(const BinaryMask& mask, Connectivity connectivity);

DetectionSet centroids(const RealSurface& surface, const Labeling& labeling, CentroidOptions options = {});

/// threshold_surface + label_components + centroids.
DetectionSet detect(const RealSurface& surface, double fraction, Connectivity connectivity,
                    CentroidOptions options = {});

}  // namespace strictmatch
