#include "strictmatch/pgm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace strictmatch {

namespace {

constexpr std::uint32_t kMaxVal = 65535;

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class Tokenizer {
public:
    explicit Tokenizer(std::string_view bytes) : bytes_(bytes) {}

    // Skips whitespace and '#' comments running to end of line.
    void skip_separators() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    std::uint64_t number(const char* what) {
        skip_separators();
        if (pos_ >= bytes_.size()) {
            throw PgmError(std::string("unexpected end of data reading ") + what);
        }
        const char* first = bytes_.data() + pos_;
        const char* last = bytes_.data() + bytes_.size();
        std::uint64_t value = 0;
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec == std::errc::result_out_of_range) {
            throw PgmError(std::string(what) + " is out of range");
        }
        if (ec != std::errc() || (ptr != last && !is_space(*ptr) && *ptr != '#')) {
            throw PgmError(std::string("malformed ") + what);
        }
        pos_ = static_cast<std::size_t>(ptr - bytes_.data());
        return value;
    }

    // The single whitespace byte ending a binary header.
    void header_terminator() {
        if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
            throw PgmError("missing whitespace after maxval");
        }
        ++pos_;
    }

    std::size_t position() const { return pos_; }
    bool at_end() const { return pos_ >= bytes_.size(); }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

void append_number(std::string& out, std::uint64_t v) {
    char buf[24];
    const auto [ptr, ec] = std::to_chars(std::begin(buf), std::end(buf), v);
    out.append(buf, ptr);
}

std::string header(char magic, Extent extent, std::uint32_t maxval) {
    std::string out{'P', magic, '\n'};
    append_number(out, extent.width);
    out += ' ';
    append_number(out, extent.height);
    out += '\n';
    append_number(out, maxval);
    out += '\n';
    return out;
}

std::uint32_t round_half_up(double v) {
    if (!(v > 0.0)) {
        return 0;
    }
    return static_cast<std::uint32_t>(std::floor(v + 0.5));
}

}  // namespace

GrayImage read_pgm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
        throw PgmError("bad magic number: expected P2 or P5");
    }
    const bool binary = bytes[1] == '5';
    Tokenizer tok(bytes.substr(2));
    if (!tok.at_end() && !is_space(bytes[2]) && bytes[2] != '#') {
        throw PgmError("bad magic number: expected P2 or P5");
    }
    const std::uint64_t width = tok.number("width");
    const std::uint64_t height = tok.number("height");
    const std::uint64_t maxval = tok.number("maxval");
    if (width == 0 || height == 0) {
        throw PgmError("image dimensions must be positive");
    }
    if (maxval == 0 || maxval > kMaxVal) {
        throw PgmError("maxval must lie in 1..65535");
    }
    if (width > (std::uint64_t{1} << 31) / height) {
        throw PgmError("image dimensions are too large");
    }
    const std::size_t count = width * height;
    std::vector<std::uint32_t> pixels(count);

    if (binary) {
        tok.header_terminator();
        const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
        const std::string_view payload = bytes.substr(2 + tok.position());
        if (payload.size() < count * bytes_per_sample) {
            throw PgmError("truncated pixel data: expected " + std::to_string(count * bytes_per_sample) +
                           " bytes, found " + std::to_string(payload.size()));
        }
        for (std::size_t i = 0; i < count; ++i) {
            std::uint32_t v = static_cast<unsigned char>(payload[i * bytes_per_sample]);
            if (bytes_per_sample == 2) {
                v = (v << 8) | static_cast<unsigned char>(payload[i * 2 + 1]);
            }
            if (v > maxval) {
                throw PgmError("sample " + std::to_string(v) + " exceeds maxval " + std::to_string(maxval));
            }
            pixels[i] = v;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const std::uint64_t v = tok.number("pixel sample");
            if (v > maxval) {
                throw PgmError("sample " + std::to_string(v) + " exceeds maxval " + std::to_string(maxval));
            }
            pixels[i] = static_cast<std::uint32_t>(v);
        }
        tok.skip_separators();
        if (!tok.at_end()) {
            throw PgmError("unexpected data after the last sample");
        }
    }
    return GrayImage(width, height, static_cast<std::uint32_t>(maxval), std::move(pixels));
}

std::string write_pgm(const GrayImage& image, PgmFormat format) {
    if (image.depth() > kMaxVal) {
        throw PgmError("depth " + std::to_string(image.depth()) + " exceeds the PGM maxval limit");
    }
    const auto px = image.pixels();
    if (format == PgmFormat::binary) {
        std::string out = header('5', image.extent(), image.depth());
        const bool wide = image.depth() > 255;
        out.reserve(out.size() + px.size() * (wide ? 2 : 1));
        for (const std::uint32_t v : px) {
            if (wide) {
                out += static_cast<char>((v >> 8) & 0xff);
            }
            out += static_cast<char>(v & 0xff);
        }
        return out;
    }
    std::string out = header('2', image.extent(), image.depth());
    for (std::size_t y = 0; y < image.height(); ++y) {
        for (std::size_t x = 0; x < image.width(); ++x) {
            if (x > 0) {
                out += ' ';
            }
            append_number(out, image.at(x, y));
        }
        out += '\n';
    }
    return out;
}

std::string write_surface(const RealSurface& surface, SurfaceScaling scaling) {
    std::vector<std::uint32_t> px(surface.values.size());
    std::uint32_t depth = 255;
    if (scaling == SurfaceScaling::max255) {
        const double hi = surface.values.empty() ? 0.0 : *std::max_element(surface.values.begin(), surface.values.end());
        if (hi > 0.0) {
            std::transform(surface.values.begin(), surface.values.end(), px.begin(), [hi](double v) {
                return std::min<std::uint32_t>(255, round_half_up(v * 255.0 / hi));
            });
        }
    } else {
        std::transform(surface.values.begin(), surface.values.end(), px.begin(), round_half_up);
        depth = std::max<std::uint32_t>(1, px.empty() ? 1 : *std::max_element(px.begin(), px.end()));
        if (depth > kMaxVal) {
            throw PgmError("surface values exceed the PGM maxval limit; use max255 scaling");
        }
    }
    return write_pgm(GrayImage(surface.extent.width, surface.extent.height, depth, std::move(px)), PgmFormat::binary);
}

std::string format_number(double value) {
    if (value == 0.0) {
        return "0";  // also folds -0
    }
    char buf[32];
    const auto [ptr, ec] = std::to_chars(std::begin(buf), std::end(buf), value);
    return std::string(buf, ptr);
}

std::string write_surface_csv(const RealSurface& surface) {
    std::string out = "lag_x,lag_y,value\n";
    for (std::size_t i = 0; i < surface.values.size(); ++i) {
        const Lag lag = surface.lag_of(i);
        out += std::to_string(lag.x);
        out += ',';
        out += std::to_string(lag.y);
        out += ',';
        out += format_number(surface.values[i]);
        out += '\n';
    }
    return out;
}

std::string write_detections(const DetectionSet& set) {
    std::string out = "id,anchor_x,anchor_y,center_x,center_y,area,mass,peak\n";
    for (const Detection& d : set.detections) {
        out += std::to_string(d.id);
        for (const double v : {d.anchor_x, d.anchor_y, d.center_x, d.center_y}) {
            out += ',';
            out += format_number(v);
        }
        out += ',';
        out += std::to_string(d.area);
        out += ',';
        out += format_number(d.mass);
        out += ',';
        out += format_number(d.peak);
        out += '\n';
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw PgmError("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw PgmError("failed reading " + path.string());
    }
    return std::move(buffer).str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

GrayImage read_pgm_file(const std::filesystem::path& path) {
    try {
        return read_pgm(read_file(path));
    } catch (const PgmError& e) {
        throw PgmError(path.string() + ": " + e.what());
    }
}

}  // namespace strictmatch
