#pragma once

// Synthetic scenes where plain correlation is fooled and strict matching is not.

#include <cstdint>

#include "strictmatch/image.hpp"
#include "strictmatch/spectral.hpp"

namespace strictmatch {

struct ScenarioOptions {
    int dimensions = 1;       // 1 or 2
    bool distractors = true;  // false plants only the template instance
};

struct Scenario {
    GrayImage templ;
    GrayImage signal;
    Lag true_lag;  // signal position of the planted template's top-left pixel
};

/// Deterministic scene at depth 255: one exact copy of an asymmetric bump
/// template, two saturated blocks narrower than the template, and one
/// isolated saturated spike, each in its own slot over a low noise floor.
///
/// The blocks outscore the true instance under plain correlation because
/// they are brighter, while under strict matching at 16 levels they cannot
/// cover the template's flanks and fall short of the template mass.
Scenario make_fig1_scenario(std::uint64_t seed, ScenarioOptions options = {});

}  // namespace strictmatch
