#include <doctest.h>

#include <deque>
#include <stdexcept>

#include "strictmatch/detect.hpp"
#include "strictmatch/matcher.hpp"
#include "strictmatch/pgm.hpp"
#include "test_support.hpp"

using namespace strictmatch;
using namespace strictmatch::testing;

namespace {

// Breadth-first flood fill, independent of the union-find labeler.
std::uint32_t flood_fill_count(const BinaryMask& mask, Connectivity connectivity) {
    const auto w = static_cast<std::int64_t>(mask.extent.width);
    const auto h = static_cast<std::int64_t>(mask.extent.height);
    std::vector<bool> seen(mask.values.size(), false);
    std::uint32_t count = 0;
    for (std::int64_t start = 0; start < w * h; ++start) {
        if (mask.values[static_cast<std::size_t>(start)] == 0 || seen[static_cast<std::size_t>(start)]) continue;
        ++count;
        std::deque<std::int64_t> queue{start};
        seen[static_cast<std::size_t>(start)] = true;
        while (!queue.empty()) {
            const std::int64_t p = queue.front();
            queue.pop_front();
            const std::int64_t px = p % w;
            const std::int64_t py = p / w;
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                for (std::int64_t dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    if (connectivity == Connectivity::four && dx != 0 && dy != 0) continue;
                    const std::int64_t nx = px + dx;
                    const std::int64_t ny = py + dy;
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    const auto q = static_cast<std::size_t>(ny * w + nx);
                    if (mask.values[q] != 0 && !seen[q]) {
                        seen[q] = true;
                        queue.push_back(ny * w + nx);
                    }
                }
            }
        }
    }
    return count;
}

BinaryMask random_mask(std::mt19937_64& rng, Extent e) {
    BinaryMask m{e, std::vector<std::uint8_t>(e.area())};
    const auto density = rng() % 100;
    for (auto& v : m.values) v = static_cast<std::uint8_t>(rng() % 100 < density);
    return m;
}

RealSurface binary_row_surface() {
    return strict_match(binary_row("0101110110"), binary_row("1010101100"), 1).surface;
}

}  // namespace

TEST_CASE("threshold_surface") {
    const RealSurface s{{4, 1}, {1, 3, 3, 2}, 0, 0, CorrelationMode::linear};
    CHECK(threshold_surface(s, 1.0).values == std::vector<std::uint8_t>{0, 1, 1, 0});
    CHECK(threshold_surface(s, 0.5).values == std::vector<std::uint8_t>{0, 1, 1, 1});
    const RealSurface flat{{3, 1}, {2, 2, 2}, 0, 0, CorrelationMode::linear};
    CHECK(threshold_surface(flat, 0.1).values == std::vector<std::uint8_t>{1, 1, 1});
    const RealSurface zero{{3, 1}, {0, 0, 0}, 0, 0, CorrelationMode::linear};
    CHECK(threshold_surface(zero, 0.5).values == std::vector<std::uint8_t>{0, 0, 0});
    CHECK_THROWS_AS(threshold_surface(s, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(threshold_surface(s, 1.5), std::invalid_argument);
}

TEST_CASE("threshold at half on the binary row surface keeps the 3s and the 5") {
    const RealSurface s = binary_row_surface();
    const BinaryMask m = threshold_surface(s, 0.5);
    std::vector<std::int64_t> lags;
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        if (m.values[i]) lags.push_back(s.lag_of(i).x);
    }
    CHECK(lags == std::vector<std::int64_t>{-3, -1, 1, 3});
    const DetectionSet d = detect(s, 0.5, Connectivity::eight, {CentroidWeighting::intensity, {10, 1}});
    REQUIRE(d.detections.size() == 4);
    CHECK(d.detections[1].peak == 5.0);
    CHECK(d.detections[1].anchor_x == -1.0);
    CHECK(d.detections[1].center_x == 3.5);
    CHECK(d.threshold_used == 2.5);
}

TEST_CASE("label_components basics") {
    CHECK(label_components({{3, 3}, std::vector<std::uint8_t>(9, 0)}, Connectivity::eight).count == 0);
    const BinaryMask diag{{2, 2}, {1, 0, 0, 1}};
    CHECK(label_components(diag, Connectivity::eight).count == 1);
    CHECK(label_components(diag, Connectivity::four).count == 2);
}

TEST_CASE("labels are dense and ordered by first pixel") {
    // A U-shape whose arms meet late forces a merge of provisional labels.
    const BinaryMask m{{5, 3},
                       {1, 0, 1, 0, 1,
                        1, 0, 1, 0, 1,
                        1, 1, 1, 0, 0}};
    const Labeling l = label_components(m, Connectivity::four);
    CHECK(l.count == 2);
    CHECK(l.labels == std::vector<std::uint32_t>{1, 0, 1, 0, 2,
                                                 1, 0, 1, 0, 2,
                                                 1, 1, 1, 0, 0});
}

TEST_CASE("property: component counts equal the flood-fill oracle") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        const BinaryMask m = random_mask(rng, {16, 16});
        for (const auto c : {Connectivity::four, Connectivity::eight}) {
            const Labeling l = label_components(m, c);
            CHECK(l.count == flood_fill_count(m, c));
            std::size_t ones = 0;
            for (std::size_t i = 0; i < m.values.size(); ++i) {
                CHECK((l.labels[i] != 0) == (m.values[i] != 0));
                ones += m.values[i];
            }
            // Areas sum to the mask population.
            RealSurface unit{m.extent, std::vector<double>(m.values.size(), 1.0), 0, 0, CorrelationMode::linear};
            std::size_t area = 0;
            for (const auto& d : centroids(unit, l).detections) area += d.area;
            CHECK(area == ones);
        }
    }
}

TEST_CASE("centroids") {
    SUBCASE("single pixel") {
        RealSurface s{{5, 4}, std::vector<double>(20, 0.0), 2, 1, CorrelationMode::linear};
        s.values[3 * 5 + 4] = 7.0;
        const DetectionSet d = detect(s, 1.0, Connectivity::eight);
        REQUIRE(d.detections.size() == 1);
        CHECK(d.detections[0].anchor_x == 2.0);  // index 4 minus origin 2
        CHECK(d.detections[0].anchor_y == 2.0);
        CHECK(d.detections[0].mass == 7.0);
        CHECK(d.detections[0].area == 1);
    }
    SUBCASE("symmetric plateau") {
        RealSurface s{{7, 7}, std::vector<double>(49, 0.0), 0, 0, CorrelationMode::linear};
        for (std::size_t y = 2; y <= 4; ++y)
            for (std::size_t x = 1; x <= 3; ++x) s.values[y * 7 + x] = 4.0;
        const DetectionSet d = detect(s, 0.5, Connectivity::four, {CentroidWeighting::intensity, {3, 5}});
        REQUIRE(d.detections.size() == 1);
        CHECK(d.detections[0].anchor_x == 2.0);
        CHECK(d.detections[0].anchor_y == 3.0);
        CHECK(d.detections[0].center_x == 3.0);
        CHECK(d.detections[0].center_y == 5.0);
        CHECK(d.detections[0].area == 9);
        CHECK(d.detections[0].peak == 4.0);
        CHECK(d.detections[0].mass == 36.0);
    }
    SUBCASE("intensity versus area weighting") {
        const RealSurface s{{3, 1}, {1, 3, 0}, 0, 0, CorrelationMode::linear};
        const Labeling l = label_components(threshold_surface(s, 0.2), Connectivity::eight);
        CHECK(centroids(s, l).detections[0].anchor_x == 0.75);
        CHECK(centroids(s, l, {CentroidWeighting::area, {1, 1}}).detections[0].anchor_x == 0.5);
    }
    SUBCASE("centroid stays inside its component's bounding box") {
        std::mt19937_64 rng(73);
        for (int trial = 0; trial < 30; ++trial) {
            const RealRaster r = random_raster(rng, {12, 10}, false);
            RealSurface s{r.extent, r.values, 3, 2, CorrelationMode::linear};
            for (auto& v : s.values) v = std::abs(v);
            const Labeling l = label_components(threshold_surface(s, 0.6), Connectivity::eight);
            const DetectionSet d = centroids(s, l);
            for (std::uint32_t k = 1; k <= l.count; ++k) {
                double lo_x = 1e9, hi_x = -1e9, lo_y = 1e9, hi_y = -1e9;
                for (std::size_t i = 0; i < l.labels.size(); ++i) {
                    if (l.labels[i] != k) continue;
                    const Lag lag = s.lag_of(i);
                    lo_x = std::min(lo_x, double(lag.x));
                    hi_x = std::max(hi_x, double(lag.x));
                    lo_y = std::min(lo_y, double(lag.y));
                    hi_y = std::max(hi_y, double(lag.y));
                }
                const Detection& det = d.detections[k - 1];
                constexpr double eps = 1e-9;
                CHECK(det.anchor_x >= lo_x - eps);
                CHECK(det.anchor_x <= hi_x + eps);
                CHECK(det.anchor_y >= lo_y - eps);
                CHECK(det.anchor_y <= hi_y + eps);
            }
        }
    }
    SUBCASE("zero-mass component is rejected") {
        const RealSurface s{{2, 1}, {0, 0}, 0, 0, CorrelationMode::linear};
        const Labeling l{{2, 1}, {1, 1}, 1};
        CHECK_THROWS_AS(centroids(s, l), std::domain_error);
    }
}

TEST_CASE("binary row surface at 0.9 yields one detection with peak 5") {
    const DetectionSet d = detect(binary_row_surface(), 0.9, Connectivity::eight, {CentroidWeighting::intensity, {10, 1}});
    REQUIRE(d.detections.size() == 1);
    CHECK(d.detections[0].peak == 5.0);
    CHECK(write_detections(d) == "id,anchor_x,anchor_y,center_x,center_y,area,mass,peak\n1,-1,0,3.5,0,1,5,5\n");
}

TEST_CASE("detection output is deterministic") {
    std::mt19937_64 rng(79);
    const GrayImage signal = random_image(rng, 40, 30, 255);
    const GrayImage templ = random_image(rng, 5, 5, 255);
    const auto run = [&] {
        const MatchResult r = strict_match(templ, signal, 4);
        return write_detections(detect(r.surface, 0.5, Connectivity::eight, {CentroidWeighting::intensity, templ.extent()}));
    };
    CHECK(run() == run());
}
