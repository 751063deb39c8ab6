#pragma once

#include <array>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "maser/analysis.hpp"
#include "maser/lle.hpp"
#include "maser/mbe.hpp"
#include "maser/params.hpp"
#include "maser/sweep.hpp"
#include "maser/timeseries.hpp"

namespace maser::io {

inline constexpr const char* k_version = "0.1.0";

// --- JSON files -----------------------------------------------------------

/// Throws ConfigError on missing file or parse failure.
[[nodiscard]] nlohmann::json load_json(const std::string& path);
void save_json(const nlohmann::json& j, const std::string& path);

/// Serialization used for hashing and summary files: sorted keys (the
/// library's object model), 2-space indent, '\n'-terminated. Stable across
/// runs of the same build.
[[nodiscard]] std::string canonical_dump(const nlohmann::json& j);

// --- config codecs ----------------------------------------------------------
// Each *_from_json validates types and value ranges and rejects unknown
// keys, naming the offending path in the ConfigError message.

/// All fields required (SI boundary; defaults would mask unit mistakes).
/// Keys mirror the struct: omega_a, omega_m, g_m, gamma_m, gamma_E,
/// gamma_D, gamma_P, c_eff, radius, omega_0 (rad/s, m, m/s).
[[nodiscard]] PhysicalParams physical_params_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json physical_params_to_json(const PhysicalParams& p);

/// Every key optional (defaults are the struct defaults).
[[nodiscard]] LleConfig lle_config_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json lle_config_to_json(const LleConfig& cfg);

/// Every key optional except that exactly one of "d0_over_chi" and "pump"
/// may be present; a "pump" block is folded into d0_over_chi via the
/// Lorentzian-delivery/saturation chain. Omitted "dt" falls back to
/// MbeConfig::suggested_dt().
[[nodiscard]] MbeConfig mbe_config_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json mbe_config_to_json(const MbeConfig& cfg);

/// pump block: {"power_w", "detuning_hz", "linewidth_hz",
/// "saturation_power_w", "d0_max", "chi"} -> d0_over_chi.
[[nodiscard]] double pump_block_to_d0_over_chi(const nlohmann::json& pump);

[[nodiscard]] SweepPlan sweep_plan_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json sweep_plan_to_json(const SweepPlan& plan);

[[nodiscard]] RegimeThresholds regime_thresholds_from_json(
    const nlohmann::json& j);
[[nodiscard]] nlohmann::json regime_thresholds_to_json(
    const RegimeThresholds& t);

// --- result serialization ---------------------------------------------------

[[nodiscard]] nlohmann::json normalized_to_json(
    const NormalizedParams& n, const ScalingConstants& s,
    const std::array<double, 3>& residuals);
[[nodiscard]] nlohmann::json regime_report_to_json(const RegimeReport& r);
/// include_bins additionally embeds the full frequency/power arrays.
[[nodiscard]] nlohmann::json comb_spectrum_to_json(const CombSpectrum& s,
                                                   bool include_bins);
[[nodiscard]] nlohmann::json pulse_fit_to_json(const PulseFit& f);
[[nodiscard]] nlohmann::json run_error_to_json(const RunError& e);
[[nodiscard]] nlohmann::json sweep_result_to_json(const SweepResult& r);

// --- bulk numeric files -----------------------------------------------------

/// CSV columns t,re,im; %.17g; header row included.
void write_timeseries_csv(const TimeSeries& ts, const std::string& path);
/// Inverse of write_timeseries_csv. A series whose im column is entirely
/// zero is marked real_valued.
[[nodiscard]] TimeSeries read_timeseries_csv(const std::string& path);

/// Long-format CSV: t,mode,cell,re,im; rows ordered by snapshot, mode, cell.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

/// Binary trajectory: magic "MASERTRJ", u32 format version, u64 grid
/// points, u64 mode count, f64 circumference, u64 snapshot count, then per
/// snapshot one f64 time and grid*modes (re, im) f64 pairs. Little-endian.
void write_trajectory_bin(const Trajectory& traj, const std::string& path);
[[nodiscard]] Trajectory read_trajectory_bin(const std::string& path);

// --- provenance -------------------------------------------------------------

/// {"version", "config_hash" (hex), "seed"}; hash is FNV-1a64 of the
/// canonical config dump. No timestamps: reruns must be bit-identical.
[[nodiscard]] nlohmann::json provenance(const nlohmann::json& config,
                                        std::uint64_t seed);

/// Recomputes the config hash and compares with the stored provenance.
[[nodiscard]] bool check_provenance(const nlohmann::json& config,
                                    const nlohmann::json& prov);

}  // namespace maser::io
