#include "strictmatch/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

namespace strictmatch {

namespace {

// FFTW planning and plan destruction are not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanDeleter {
    void operator()(fftw_plan_s* plan) const {
        if (plan != nullptr) {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan);
        }
    }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

constexpr unsigned kPlanFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

Plan plan_c2c(Extent e, std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out,
              int sign) {
    std::lock_guard lock(planner_mutex());
    return Plan(fftw_plan_dft_2d(static_cast<int>(e.height), static_cast<int>(e.width), as_fftw(in.data()),
                                 as_fftw(out.data()), sign, kPlanFlags));
}

void require_shape(const RealRaster& r, const char* name) {
    if (r.extent.width == 0 || r.extent.height == 0) {
        throw std::invalid_argument(std::string(name) + " raster is empty");
    }
    if (r.values.size() != r.extent.area()) {
        throw std::invalid_argument(std::string(name) + " raster length does not match its extent");
    }
}

void require_compatible(const RealRaster& a, const RealRaster& b, CorrelationMode mode) {
    require_shape(a, "first");
    require_shape(b, "second");
    if (mode == CorrelationMode::circular && a.extent != b.extent) {
        throw std::invalid_argument("circular correlation requires rasters of equal extent");
    }
}

std::size_t wrap(std::int64_t v, std::size_t n) {
    const auto m = static_cast<std::int64_t>(n);
    return static_cast<std::size_t>(((v % m) + m) % m);
}

}  // namespace

RealRaster to_raster(const GrayImage& image) {
    const auto px = image.pixels();
    return {image.extent(), std::vector<double>(px.begin(), px.end())};
}

RealRaster to_raster(const BinaryLayer& layer) {
    return {layer.extent, std::vector<double>(layer.values.begin(), layer.values.end())};
}

Lag RealSurface::lag_of(std::size_t index) const {
    const auto x = static_cast<std::int64_t>(index % extent.width);
    const auto y = static_cast<std::int64_t>(index / extent.width);
    return {x - static_cast<std::int64_t>(origin_x), y - static_cast<std::int64_t>(origin_y)};
}

Spectrum forward_dft(const RealRaster& raster) {
    require_shape(raster, "input");
    std::vector<std::complex<double>> in(raster.values.begin(), raster.values.end());
    Spectrum out{raster.extent, std::vector<std::complex<double>>(in.size())};
    const Plan plan = plan_c2c(raster.extent, in, out.bins, FFTW_FORWARD);
    fftw_execute_dft(plan.get(), as_fftw(in.data()), as_fftw(out.bins.data()));
    return out;
}

RealRaster inverse_dft(const Spectrum& spectrum) {
    if (spectrum.extent.area() == 0 || spectrum.bins.size() != spectrum.extent.area()) {
        throw std::invalid_argument("spectrum length does not match its extent");
    }
    std::vector<std::complex<double>> in = spectrum.bins;
    std::vector<std::complex<double>> out(in.size());
    const Plan plan = plan_c2c(spectrum.extent, in, out, FFTW_BACKWARD);
    fftw_execute_dft(plan.get(), as_fftw(in.data()), as_fftw(out.data()));

    const double scale = 1.0 / static_cast<double>(out.size());
    double peak = 0.0;
    double residue = 0.0;
    RealRaster result{spectrum.extent, std::vector<double>(out.size())};
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto v = out[i] * scale;
        peak = std::max(peak, std::abs(v));
        residue = std::max(residue, std::abs(v.imag()));
        result.values[i] = v.real();
    }
    if (residue > 1e-9 * std::max(peak, 1.0)) {
        throw std::domain_error("spectrum is not Hermitian: imaginary residue " + std::to_string(residue));
    }
    return result;
}

Extent surface_extent(Extent a, Extent b, CorrelationMode mode) {
    if (mode == CorrelationMode::circular) {
        return b;
    }
    return {a.width + b.width - 1, a.height + b.height - 1};
}

std::size_t smooth_size(std::size_t n) {
    for (std::size_t candidate = std::max<std::size_t>(n, 1);; ++candidate) {
        std::size_t r = candidate;
        for (std::size_t p : {2, 3, 5, 7}) {
            while (r % p == 0) {
                r /= p;
            }
        }
        if (r == 1) {
            return candidate;
        }
    }
}

double snap_to_integers(std::span<double> values, double tolerance) {
    double worst = 0.0;
    for (double& v : values) {
        const double r = std::round(v);
        const double d = std::abs(v - r);
        if (d <= tolerance) {
            worst = std::max(worst, d);
            v = r;
        }
    }
    return worst;
}

struct SpectralCorrelator::Impl {
    Extent a;
    Extent b;
    CorrelationMode mode;
    Extent padded;
    std::size_t half_width;  // r2c output row length
    std::vector<double> real_buf;
    std::vector<std::complex<double>> spec_a;
    std::vector<std::complex<double>> spec_b;
    std::vector<std::complex<double>> acc;
    Plan forward;
    Plan inverse;

    std::size_t spectrum_size() const { return padded.height * half_width; }

    void transform(std::span<const double> src, Extent src_extent, std::vector<std::complex<double>>& dst) {
        std::fill(real_buf.begin(), real_buf.end(), 0.0);
        for (std::size_t y = 0; y < src_extent.height; ++y) {
            std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(y * src_extent.width), src_extent.width,
                        real_buf.begin() + static_cast<std::ptrdiff_t>(y * padded.width));
        }
        fftw_execute_dft_r2c(forward.get(), real_buf.data(), as_fftw(dst.data()));
    }
};

SpectralCorrelator::SpectralCorrelator(Extent a, Extent b, CorrelationMode mode) : impl_(std::make_unique<Impl>()) {
    if (a.area() == 0 || b.area() == 0) {
        throw std::invalid_argument("cannot correlate an empty raster");
    }
    if (mode == CorrelationMode::circular && a != b) {
        throw std::invalid_argument("circular correlation requires rasters of equal extent");
    }
    auto& s = *impl_;
    s.a = a;
    s.b = b;
    s.mode = mode;
    if (mode == CorrelationMode::linear) {
        const Extent full = surface_extent(a, b, mode);
        s.padded = {smooth_size(full.width), full.height == 1 ? 1 : smooth_size(full.height)};
    } else {
        s.padded = b;
    }
    s.half_width = s.padded.width / 2 + 1;
    s.real_buf.assign(s.padded.area(), 0.0);
    s.spec_a.assign(s.spectrum_size(), {});
    s.spec_b.assign(s.spectrum_size(), {});
    s.acc.assign(s.spectrum_size(), {});

    const int rows = static_cast<int>(s.padded.height);
    const int cols = static_cast<int>(s.padded.width);
    std::lock_guard lock(planner_mutex());
    s.forward = Plan(fftw_plan_dft_r2c_2d(rows, cols, s.real_buf.data(), as_fftw(s.spec_a.data()), kPlanFlags));
    s.inverse = Plan(fftw_plan_dft_c2r_2d(rows, cols, as_fftw(s.spec_a.data()), s.real_buf.data(), kPlanFlags));
    if (!s.forward || !s.inverse) {
        throw std::runtime_error("FFTW failed to create a transform plan");
    }
}

SpectralCorrelator::~SpectralCorrelator() = default;
SpectralCorrelator::SpectralCorrelator(SpectralCorrelator&&) noexcept = default;
SpectralCorrelator& SpectralCorrelator::operator=(SpectralCorrelator&&) noexcept = default;

void SpectralCorrelator::accumulate(std::span<const double> a, std::span<const double> b) {
    auto& s = *impl_;
    if (a.size() != s.a.area() || b.size() != s.b.area()) {
        throw std::invalid_argument("raster length does not match the correlator extents");
    }
    s.transform(a, s.a, s.spec_a);
    s.transform(b, s.b, s.spec_b);
    for (std::size_t i = 0; i < s.acc.size(); ++i) {
        s.acc[i] += std::conj(s.spec_a[i]) * s.spec_b[i];
    }
}

RealSurface SpectralCorrelator::surface() const {
    const auto& s = *impl_;
    // c2r overwrites its input.
    std::vector<std::complex<double>> spectrum = s.acc;
    std::vector<double> cyclic(s.padded.area());
    fftw_execute_dft_c2r(s.inverse.get(), as_fftw(spectrum.data()), cyclic.data());
    const double scale = 1.0 / static_cast<double>(s.padded.area());

    RealSurface out;
    out.mode = s.mode;
    out.extent = surface_extent(s.a, s.b, s.mode);
    out.values.resize(out.extent.area());
    if (s.mode == CorrelationMode::circular) {
        std::transform(cyclic.begin(), cyclic.end(), out.values.begin(), [scale](double v) { return v * scale; });
        return out;
    }
    out.origin_x = s.a.width - 1;
    out.origin_y = s.a.height - 1;
    for (std::size_t iy = 0; iy < out.extent.height; ++iy) {
        const std::size_t py = wrap(static_cast<std::int64_t>(iy) - static_cast<std::int64_t>(out.origin_y),
                                    s.padded.height);
        for (std::size_t ix = 0; ix < out.extent.width; ++ix) {
            const std::size_t px = wrap(static_cast<std::int64_t>(ix) - static_cast<std::int64_t>(out.origin_x),
                                        s.padded.width);
            out.values[iy * out.extent.width + ix] = cyclic[py * s.padded.width + px] * scale;
        }
    }
    return out;
}

RealSurface cross_correlate_fft(const RealRaster& a, const RealRaster& b, CorrelationMode mode) {
    require_compatible(a, b, mode);
    SpectralCorrelator correlator(a.extent, b.extent, mode);
    correlator.accumulate(a.values, b.values);
    return correlator.surface();
}

RealSurface cross_correlate_naive(const RealRaster& a, const RealRaster& b, CorrelationMode mode) {
    require_compatible(a, b, mode);
    RealSurface out;
    out.mode = mode;
    out.extent = surface_extent(a.extent, b.extent, mode);
    out.values.assign(out.extent.area(), 0.0);
    const auto wa = static_cast<std::int64_t>(a.extent.width);
    const auto ha = static_cast<std::int64_t>(a.extent.height);
    const auto wb = static_cast<std::int64_t>(b.extent.width);
    const auto hb = static_cast<std::int64_t>(b.extent.height);
    const auto ws = static_cast<std::int64_t>(out.extent.width);

    // Scatter each nonzero template pixel over the lags it contributes to.
    // Per lag, terms are added in row-major template order, so results are
    // bit-for-bit reproducible.
    if (mode == CorrelationMode::linear) {
        out.origin_x = a.extent.width - 1;
        out.origin_y = a.extent.height - 1;
        for (std::int64_t ty = 0; ty < ha; ++ty) {
            for (std::int64_t tx = 0; tx < wa; ++tx) {
                const double w = a.values[static_cast<std::size_t>(ty * wa + tx)];
                if (w == 0.0) {
                    continue;
                }
                // Lag index i corresponds to tau = i - (wa - 1); signal x = tx + tau.
                for (std::int64_t sy = 0; sy < hb; ++sy) {
                    const std::int64_t iy = sy - ty + (ha - 1);
                    double* dst = out.values.data() + iy * ws + (wa - 1 - tx);
                    const double* src = b.values.data() + sy * wb;
                    for (std::int64_t sx = 0; sx < wb; ++sx) {
                        dst[sx] += w * src[sx];
                    }
                }
            }
        }
        return out;
    }

    for (std::int64_t ty = 0; ty < ha; ++ty) {
        for (std::int64_t tx = 0; tx < wa; ++tx) {
            const double w = a.values[static_cast<std::size_t>(ty * wa + tx)];
            if (w == 0.0) {
                continue;
            }
            for (std::int64_t ly = 0; ly < hb; ++ly) {
                const std::int64_t sy = (ty + ly) % hb;
                double* dst = out.values.data() + ly * ws;
                const double* src = b.values.data() + sy * wb;
                for (std::int64_t lx = 0; lx < wb; ++lx) {
                    dst[lx] += w * src[(tx + lx) % wb];
                }
            }
        }
    }
    return out;
}

}  // namespace strictmatch
