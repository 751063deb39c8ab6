#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "maser/sweep.hpp"

namespace maser {

/// Named, ready-to-run configuration. The bank spans the rate-ratio
/// regimes (field decay far above, comparable to, and far below the spin
/// rates) because the qualitative dynamics hinge on those ratios, and the
/// underlying microscopic rates are not pinned down by any measurement.
struct Preset {
    std::string name;
    std::string description;
    SolverKind solver = SolverKind::mbe;
    nlohmann::json config;  // solver config document (io codec schema)
    SweepInit init;
    double discard_fraction = 0.5;
};

[[nodiscard]] const std::vector<Preset>& preset_bank();

/// nullptr when the name is unknown.
[[nodiscard]] const Preset* find_preset(const std::string& name);

}  // namespace maser
