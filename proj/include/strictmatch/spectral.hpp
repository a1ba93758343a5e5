#pragma once

// DFT engine and cross-correlation primitives for 1D/2D real rasters.
//
// Lag convention, shared by every correlation routine in this library:
//
//   surface[tau] = sum_x a(x) * b(x + tau)
//
// `a` is the template-side raster, `b` the signal-side raster. In linear mode
// the surface covers every lag with nonzero overlap, tau in
// [-(Wa - 1), Wb - 1] x [-(Ha - 1), Hb - 1]; surface index (0, 0) is the most
// negative displacement and `origin` = (Wa - 1, Ha - 1) is zero lag. In
// circular mode lags wrap modulo the common extent and origin is (0, 0).
//
// Transforms are unnormalized forward and scaled by 1/N on the inverse.

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "strictmatch/image.hpp"

namespace strictmatch {

enum class CorrelationMode { linear, circular };

struct RealRaster {
    Extent extent;
    std::vector<double> values;

    double at(std::size_t x, std::size_t y) const { return values[y * extent.width + x]; }
};

RealRaster to_raster(const GrayImage& image);
RealRaster to_raster(const BinaryLayer& layer);

struct Spectrum {
    Extent extent;
    std::vector<std::complex<double>> bins;
};

/// Signed displacement of the template relative to the signal.
struct Lag {
    std::int64_t x = 0;
    std::int64_t y = 0;
    friend bool operator==(const Lag&, const Lag&) = default;
};

struct RealSurface {
    Extent extent;
    std::vector<double> values;
    std::size_t origin_x = 0;
    std::size_t origin_y = 0;
    CorrelationMode mode = CorrelationMode::linear;

    double at(std::size_t x, std::size_t y) const { return values[y * extent.width + x]; }
    Lag lag_of(std::size_t index) const;
};

Spectrum forward_dft(const RealRaster& raster);

/// Inverse transform of a Hermitian spectrum. Throws if the imaginary residue
/// exceeds 1e-9 of the peak magnitude, which means the spectrum was not the
/// transform of a real raster.
RealRaster inverse_dft(const Spectrum& spectrum);

RealSurface cross_correlate_fft(const RealRaster& a, const RealRaster& b, CorrelationMode mode);
RealSurface cross_correlate_naive(const RealRaster& a, const RealRaster& b, CorrelationMode mode);

inline constexpr double kSnapTolerance = 1e-6;

/// Rounds values lying within `tolerance` of an integer. Returns the largest
/// residue seen among snapped values.
double snap_to_integers(std::span<double> values, double tolerance = kSnapTolerance);

/// Extent of the surface produced by correlating `a` against `b`.
Extent surface_extent(Extent a, Extent b, CorrelationMode mode);

/// Smallest n' >= n whose prime factors are all in {2, 3, 5, 7}.
std::size_t smooth_size(std::size_t n);

/// Accumulates sum_k conj(F(a_k)) * F(b_k) over pairs sharing extents and
/// resolves to a single surface with one inverse transform.
///
/// Plans are created once on construction; an instance must not be shared
/// between threads while accumulating.
class SpectralCorrelator {
public:
    SpectralCorrelator(Extent a, Extent b, CorrelationMode mode);
    ~SpectralCorrelator();
    SpectralCorrelator(SpectralCorrelator&&) noexcept;
    SpectralCorrelator& operator=(SpectralCorrelator&&) noexcept;

    void accumulate(std::span<const double> a, std::span<const double> b);

    RealSurface surface() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace strictmatch
