#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "maser/analysis.hpp"
#include "maser/timeseries.hpp"

namespace maser {

enum class SolverKind { lle, mbe };

enum class SeedMode {
    per_point,  // seed_base + linear point index
    fixed,      // seed_base everywhere (symmetric sweeps need this)
};

/// One sweep dimension: a JSON pointer into the solver config document
/// ("/d0_over_chi", "/modes/0/theta", "/pump/power") and the values it
/// takes. The pointer must resolve in the base config.
struct SweepAxis {
    std::string parameter;
    std::vector<double> values;
};

/// Initial condition for each point. kind: "zero" | "noise" (both solvers),
/// "sech" (lle), "fixed_point" (mbe). amplitude is the noise or sech
/// amplitude, or the relative perturbation for "fixed_point".
struct SweepInit {
    std::string kind = "noise";
    double amplitude = 1e-3;
};

struct SweepPlan {
    SolverKind solver = SolverKind::mbe;
    nlohmann::json base_config;
    std::vector<SweepAxis> axes;  // 1 or 2
    SeedMode seed_mode = SeedMode::per_point;
    std::uint64_t seed_base = 0;
    SweepInit init;
    /// Fraction of output samples dropped as transient before
    /// classification.
    double discard_fraction = 0.5;
    RegimeThresholds thresholds;
    /// Start each point from the previous point's final state instead of a
    /// fresh initial condition (hysteresis emulation). 1D only; forces
    /// serial execution.
    bool continuation = false;
    /// Keep each point's post-discard output series in the result (large).
    bool keep_outputs = false;
    unsigned threads = 1;  // 0: hardware concurrency

    void validate() const;  // throws ConfigError
    [[nodiscard]] std::vector<std::size_t> shape() const;
    [[nodiscard]] std::size_t point_count() const;
    /// Hash of everything that affects the numbers (excludes threads).
    [[nodiscard]] std::uint64_t hash() const;
};

struct SweepPoint {
    std::size_t index = 0;        // linear, row-major (first axis outermost)
    std::vector<double> coords;   // one value per axis
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;            // set when failed
    RegimeReport report;          // valid when !failed
    std::optional<TimeSeries> output;  // present with keep_outputs
};

struct SweepResult {
    std::vector<std::size_t> shape;
    std::vector<SweepAxis> axes;
    std::vector<SweepPoint> points;  // row-major, every point present
    std::uint64_t config_hash = 0;
    std::string version;
};

/// Runs every grid point (solver + analysis), record-and-continue on
/// failures. Deterministic for a given plan: point seeds are derived from
/// seed_base, and the assembly is order-independent, so worker count never
/// changes the result.
[[nodiscard]] SweepResult run_sweep(const SweepPlan& plan);

/// Regime boundary between a pair of adjacent points along an axis.
struct RegimeTransition {
    std::size_t position = 0;  // index of the left point along the axis
    RegimeLabel label_before = RegimeLabel::sub_threshold;
    RegimeLabel label_after = RegimeLabel::sub_threshold;
    std::size_t pulses_before = 0;
    std::size_t pulses_after = 0;
    bool label_changed = false;
    bool pulse_count_changed = false;
};

/// Scans a 1D slice (along `axis`, the other axis pinned to other_index)
/// for adjacent-point label or pulse-count changes. Pairs touching a
/// failed point are skipped.
[[nodiscard]] std::vector<RegimeTransition> boundary_scan(
    const SweepResult& result, std::size_t axis = 0,
    std::size_t other_index = 0);

}  // namespace maser
