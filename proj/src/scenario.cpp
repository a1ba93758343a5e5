#include "strictmatch/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

namespace strictmatch {

namespace {

constexpr std::uint32_t kDepth = 255;

// mt19937_64 output is specified by the standard; the distributions are not,
// so ranges are derived from raw draws to keep scenes identical everywhere.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : engine_(seed) {}

    std::uint32_t between(std::uint32_t lo, std::uint32_t hi) {
        return lo + static_cast<std::uint32_t>(engine_() % (static_cast<std::uint64_t>(hi - lo) + 1));
    }

    template <typename T, std::size_t N>
    void shuffle(std::array<T, N>& items) {
        for (std::size_t i = N - 1; i > 0; --i) {
            std::swap(items[i], items[between(0, static_cast<std::uint32_t>(i))]);
        }
    }

private:
    std::mt19937_64 engine_;
};

std::uint32_t jittered(double value, Draw& draw) {
    const double j = static_cast<double>(draw.between(0, 8)) - 4.0;
    return static_cast<std::uint32_t>(std::clamp(std::lround(value + j), 0L, static_cast<long>(kDepth)));
}

enum class Object { instance, block_a, block_b, spike };

void stamp(GrayImage& signal, const GrayImage& patch, std::size_t x0, std::size_t y0) {
    for (std::size_t y = 0; y < patch.height(); ++y) {
        for (std::size_t x = 0; x < patch.width(); ++x) {
            signal.set(x0 + x, y0 + y, patch.at(x, y));
        }
    }
}

GrayImage flat(std::size_t w, std::size_t h, std::uint32_t value) {
    return GrayImage(w, h, kDepth, std::vector<std::uint32_t>(w * h, value));
}

}  // namespace

Scenario make_fig1_scenario(std::uint64_t seed, ScenarioOptions options) {
    if (options.dimensions != 1 && options.dimensions != 2) {
        throw std::invalid_argument("scenario dimensions must be 1 or 2");
    }
    const bool two_d = options.dimensions == 2;
    Draw draw(seed);

    // Asymmetric bump profile; 2D templates are its outer product.
    const std::vector<double> profile_1d{0.27, 0.55, 0.82, 1.0, 0.91, 0.68, 0.45, 0.27, 0.14};
    const std::vector<double> profile_2d{0.3, 0.6, 0.9, 1.0, 0.75, 0.5, 0.25};
    const std::vector<double>& profile = two_d ? profile_2d : profile_1d;
    const std::size_t tw = profile.size();
    const std::size_t th = two_d ? profile.size() : 1;
    const double peak = static_cast<double>(draw.between(200, 230));

    GrayImage templ(tw, th, kDepth);
    for (std::size_t y = 0; y < th; ++y) {
        for (std::size_t x = 0; x < tw; ++x) {
            const double shape = two_d ? profile[x] * profile[y] : profile[x];
            templ.set(x, y, jittered(peak * shape, draw));
        }
    }

    // Slots: four segments of a 256-sample row, or four quadrants of 64x64.
    const std::size_t slot = two_d ? 32 : 64;
    const std::size_t sw = two_d ? 2 * slot : 4 * slot;
    const std::size_t sh = two_d ? 2 * slot : 1;
    GrayImage signal(sw, sh, kDepth);
    for (std::size_t y = 0; y < sh; ++y) {
        for (std::size_t x = 0; x < sw; ++x) {
            signal.set(x, y, draw.between(0, 8));
        }
    }

    std::array<Object, 4> order{Object::instance, Object::block_a, Object::block_b, Object::spike};
    draw.shuffle(order);

    const std::size_t block = two_d ? 4 : 5;
    const std::size_t margin = two_d ? 4 : 12;
    Lag true_lag;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t slot_x = two_d ? (k % 2) * slot : k * slot;
        const std::size_t slot_y = two_d ? (k / 2) * slot : 0;
        const auto place = [&](std::size_t extent) {
            return margin + draw.between(0, static_cast<std::uint32_t>(slot - 2 * margin - extent));
        };
        const std::size_t ox = slot_x + place(tw);
        const std::size_t oy = two_d ? slot_y + place(th) : 0;
        switch (order[k]) {
            case Object::instance:
                stamp(signal, templ, ox, oy);
                true_lag = {static_cast<std::int64_t>(ox), static_cast<std::int64_t>(oy)};
                break;
            case Object::block_a:
            case Object::block_b:
                if (options.distractors) {
                    stamp(signal, flat(block, two_d ? block : 1, draw.between(245, 255)), ox, oy);
                }
                break;
            case Object::spike:
                if (options.distractors) {
                    signal.set(ox, oy, kDepth);
                }
                break;
        }
    }
    return {std::move(templ), std::move(signal), true_lag};
}

}  // namespace strictmatch
