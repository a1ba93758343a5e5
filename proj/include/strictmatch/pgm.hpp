#pragma once

// Portable graymap (P2/P5) codec plus surface and detection artifacts.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "strictmatch/detect.hpp"
#include "strictmatch/image.hpp"
#include "strictmatch/spectral.hpp"

namespace strictmatch {

class PgmError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class PgmFormat { ascii, binary };  // P2, P5

enum class SurfaceScaling { none, max255 };

/// Parses a P2 or P5 stream. The image depth is the stream's maxval; 16-bit
/// P5 samples are big-endian. Any malformed input throws PgmError.
GrayImage read_pgm(std::string_view bytes);

/// Canonical encoding: single spaces and newlines, no comments.
std::string write_pgm(const GrayImage& image, PgmFormat format = PgmFormat::binary);

/// Renders a surface as a P5 panel. `max255` maps [0, max] linearly onto
/// 0..255 rounding half up; `none` rounds values half up with maxval at
/// least 1. Negative values clamp to 0.
std::string write_surface(const RealSurface& surface, SurfaceScaling scaling = SurfaceScaling::max255);

/// Exact surface values: lag_x,lag_y,value with a header row.
std::string write_surface_csv(const RealSurface& surface);

/// Detection list: id,anchor_x,anchor_y,center_x,center_y,area,mass,peak.
std::string write_detections(const DetectionSet& set);

/// Shortest decimal form that reads back to the same double.
std::string format_number(double value);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

GrayImage read_pgm_file(const std::filesystem::path& path);

}  // namespace strictmatch
