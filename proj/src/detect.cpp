#include "strictmatch/detect.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace strictmatch {

namespace {

class DisjointSet {
public:
    std::uint32_t make() {
        parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
        return parent_.back();
    }

    std::uint32_t find(std::uint32_t v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent_[std::max(a, b)] = std::min(a, b);
        }
    }

private:
    std::vector<std::uint32_t> parent_;
};

}  // namespace

double threshold_level(const RealSurface& surface, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw std::invalid_argument("threshold fraction must lie in (0, 1]");
    }
    if (surface.values.empty()) {
        throw std::invalid_argument("surface is empty");
    }
    return fraction * *std::max_element(surface.values.begin(), surface.values.end());
}

BinaryMask threshold_surface(const RealSurface& surface, double fraction) {
    const double level = threshold_level(surface, fraction);
    BinaryMask mask{surface.extent, std::vector<std::uint8_t>(surface.values.size(), 0)};
    if (level <= 0.0) {
        return mask;
    }
    std::transform(surface.values.begin(), surface.values.end(), mask.values.begin(),
                   [level](double v) { return static_cast<std::uint8_t>(v >= level); });
    return mask;
}

Labeling label_components(const BinaryMask& mask, Connectivity connectivity) {
    const std::size_t w = mask.extent.width;
    const std::size_t h = mask.extent.height;
    if (mask.values.size() != mask.extent.area()) {
        throw std::invalid_argument("mask length does not match its extent");
    }
    constexpr std::uint32_t kNone = 0xffffffffu;
    std::vector<std::uint32_t> provisional(mask.values.size(), kNone);
    DisjointSet sets;

    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const std::size_t i = y * w + x;
            if (mask.values[i] == 0) {
                continue;
            }
            // Previously visited neighbours: W, and N/NW/NE for 8-connectivity.
            std::uint32_t label = kNone;
            const auto join = [&](std::size_t j) {
                if (provisional[j] == kNone) {
                    return;
                }
                if (label == kNone) {
                    label = provisional[j];
                } else {
                    sets.unite(label, provisional[j]);
                }
            };
            if (x > 0) join(i - 1);
            if (y > 0) {
                join(i - w);
                if (connectivity == Connectivity::eight) {
                    if (x > 0) join(i - w - 1);
                    if (x + 1 < w) join(i - w + 1);
                }
            }
            provisional[i] = label == kNone ? sets.make() : label;
        }
    }

    Labeling out{mask.extent, std::vector<std::uint32_t>(mask.values.size(), 0), 0};
    std::vector<std::uint32_t> dense;
    for (std::size_t i = 0; i < provisional.size(); ++i) {
        if (provisional[i] == kNone) {
            continue;
        }
        const std::uint32_t root = sets.find(provisional[i]);
        if (root >= dense.size()) {
            dense.resize(root + 1, 0);
        }
        if (dense[root] == 0) {
            dense[root] = ++out.count;
        }
        out.labels[i] = dense[root];
    }
    return out;
}

DetectionSet centroids(const RealSurface& surface, const Labeling& labeling, CentroidOptions options) {
    if (labeling.extent != surface.extent || labeling.labels.size() != surface.values.size()) {
        throw std::invalid_argument("labeling does not match the surface extent");
    }
    struct Accum {
        double weight = 0.0;
        double sx = 0.0;
        double sy = 0.0;
        double mass = 0.0;
        double peak = 0.0;
        std::size_t area = 0;
    };
    std::vector<Accum> acc(labeling.count);
    for (std::size_t i = 0; i < labeling.labels.size(); ++i) {
        const std::uint32_t label = labeling.labels[i];
        if (label == 0) {
            continue;
        }
        if (label > labeling.count) {
            throw std::invalid_argument("label exceeds the component count");
        }
        Accum& a = acc[label - 1];
        const double v = surface.values[i];
        const Lag lag = surface.lag_of(i);
        const double w = options.weighting == CentroidWeighting::intensity ? v : 1.0;
        a.peak = a.area == 0 ? v : std::max(a.peak, v);
        a.weight += w;
        a.sx += w * static_cast<double>(lag.x);
        a.sy += w * static_cast<double>(lag.y);
        a.mass += v;
        ++a.area;
    }

    DetectionSet out;
    const double half_w = (static_cast<double>(options.template_extent.width) - 1.0) / 2.0;
    const double half_h = (static_cast<double>(options.template_extent.height) - 1.0) / 2.0;
    for (std::uint32_t k = 0; k < labeling.count; ++k) {
        const Accum& a = acc[k];
        if (a.area == 0) {
            throw std::invalid_argument("component " + std::to_string(k + 1) + " has no pixels");
        }
        if (a.weight <= 0.0) {
            throw std::domain_error("component " + std::to_string(k + 1) + " has no positive mass");
        }
        Detection d;
        d.id = k + 1;
        d.anchor_x = a.sx / a.weight;
        d.anchor_y = a.sy / a.weight;
        d.center_x = d.anchor_x + half_w;
        d.center_y = d.anchor_y + half_h;
        d.area = a.area;
        d.mass = a.mass;
        d.peak = a.peak;
        out.detections.push_back(d);
    }
    return out;
}

DetectionSet detect(const RealSurface& surface, double fraction, Connectivity connectivity,
                    CentroidOptions options) {
    const BinaryMask mask = threshold_surface(surface, fraction);
    DetectionSet out = centroids(surface, label_components(mask, connectivity), options);
    out.threshold_used = threshold_level(surface, fraction);
    out.connectivity = connectivity;
    return out;
}

}  // namespace strictmatch
