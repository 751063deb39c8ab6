#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maser/timeseries.hpp"

namespace maser {

/// One signal mode of the normalized field/polarization/inversion system.
/// coupling_weight is the mode's coupling relative to mode 1 (g_m / g_1);
/// mode 1 must keep weight 1 since the cooperativity is defined against it.
struct MbeModeConfig {
    double theta = 0.0;           // dimensionless detuning, 2*Omega_m/gamma_m
    double gamma = 1.0;           // photon loss rate (1/time)
    double coupling_weight = 1.0; // g_m / g_1
};

/// Spin-ensemble discretization. count == 1 reproduces the homogeneous
/// system; count > 1 spreads the atomic detuning over a symmetric
/// Lorentzian quadrature comb of half-width `spread` (in delta units).
/// With per_mode_packets each mode couples to its own copy of the comb
/// instead of a single shared one.
struct MbeSpinConfig {
    std::size_t count = 1;
    double spread = 0.0;
    bool per_mode_packets = false;
};

/// Dual-mode traveling-wave system on a ring of circumference 2*pi*radius:
///
///   dF_m/dt + c dF_m/dz = -(gamma_m/2) [ (1 + i theta_m) F_m + 2 C_m J ]
///   dJ/dt   = -(gamma_a/2) [ (1 + i delta) J - S D ]
///   dD/dt   = -gamma_I [ D - d0_over_chi + (S* J + J* S)/2 ]
///
/// with S = sum_m w_m F_m and C_m = C w_m gamma_1 / gamma_m, so a single
/// mode with w_1 = 1 reduces to the standard normalized system. The two
/// fields never couple directly; they interact only through the shared
/// polarization and inversion.
struct MbeConfig {
    std::vector<MbeModeConfig> modes{MbeModeConfig{}};  // 1 or 2 entries
    double delta = 0.0;        // atomic detuning, 2*Omega_a/gamma_a
    double gamma_a = 1.0;      // polarization decay rate
    double gamma_I = 1.0;      // inversion relaxation rate
    double cooperativity = 1.0;
    double d0_over_chi = 0.0;  // scaled pump parameter

    std::size_t grid_points = 64;  // power of two
    double c_eff = 1.0;            // advection velocity
    double radius = 1.0;           // ring radius; circumference 2*pi*radius

    double dt = 1e-3;
    double t_end = 1.0;

    MbeSpinConfig spin;
    std::uint64_t noise_seed = 0;

    std::size_t snapshot_stride = 0;  // 0: only first and last snapshot
    std::size_t output_stride = 1;
    double blowup_threshold = 1e6;

    void validate() const;  // throws ConfigError

    [[nodiscard]] std::size_t mode_count() const { return modes.size(); }
    [[nodiscard]] double circumference() const;
    /// C_m = C * w_m * gamma_1 / gamma_m.
    [[nodiscard]] double mode_cooperativity(std::size_t m) const;
    /// min(0.1/gamma_max, 0.1 dz/c): keeps the local stage stable and the
    /// advection phase per step small.
    [[nodiscard]] double suggested_dt() const;
};

/// Symmetric Lorentzian quadrature nodes: detuning offsets of the spin
/// packets (midpoint inverse-CDF rule, equal weights 1/count).
[[nodiscard]] std::vector<double> lorentzian_packet_offsets(std::size_t count,
                                                            double spread);

/// Field, polarization and inversion samples on the ring grid.
/// fields[m][z]; polarization[p][z]; inversion[p][z] where p runs over
/// spin packets (count, or count*mode_count with per-mode packets).
struct MbeState {
    double t = 0.0;
    std::vector<std::vector<std::complex<double>>> fields;
    std::vector<std::vector<std::complex<double>>> polarization;
    std::vector<std::vector<double>> inversion;
};

// Initial condition generators.
[[nodiscard]] MbeState mbe_init_zero(const MbeConfig& cfg);
/// Complex Gaussian noise of the given amplitude on the fields; spins at
/// the non-lasing equilibrium.
[[nodiscard]] MbeState mbe_init_noise(const MbeConfig& cfg, double amplitude);
/// Homogeneous lasing fixed point (single mode, single packet) with an
/// optional relative white-noise perturbation on the field.
[[nodiscard]] MbeState mbe_init_fixed_point(const MbeConfig& cfg,
                                            double rel_perturbation);

/// Reusable stepper: exact spectral advection (integrating factor) around a
/// classical RK4 stage for the local stiff terms (Strang arrangement).
class MbeStepper {
public:
    explicit MbeStepper(const MbeConfig& cfg);

    /// One step of size dt. Throws BlowupError past the threshold or on
    /// non-finite values.
    void step(MbeState& state);

    [[nodiscard]] const MbeConfig& config() const { return cfg_; }
    [[nodiscard]] const std::vector<double>& packet_offsets() const {
        return packet_offsets_;
    }

private:
    void advect_half(MbeState& state);
    void local_rhs(const MbeState& s, MbeState& out) const;

    MbeConfig cfg_;
    std::vector<std::complex<double>> advection_half_;  // per-bin multiplier
    std::vector<double> packet_offsets_;   // detuning offset per packet row
    std::vector<int> packet_mode_;         // -1: couples to every mode
    std::vector<double> packet_weight_;    // quadrature weight per row
    std::size_t step_count_ = 0;
    MbeState k_, stage_, acc_;  // RK4 scratch
};

/// Single step as a pure function (convenience over MbeStepper).
[[nodiscard]] MbeState mbe_step(const MbeState& state, const MbeConfig& cfg);

/// Homogeneous single-mode lasing fixed point. Stationarity pulls the
/// oscillation to the frequency where the effective detunings satisfy
/// theta' = -delta'; when theta != -delta the state is reported in that
/// pulled frame (pulled_frequency is the carrier offset, 0 otherwise).
struct CwFixedPoint {
    double intensity = 0.0;  // |F|^2
    double inversion = 0.0;  // D
    std::complex<double> field{0.0, 0.0};
    std::complex<double> polarization{0.0, 0.0};
    bool lasing = false;
    double pulled_frequency = 0.0;  // carrier offset (rad / time)
    double pulled_theta = 0.0;      // effective mode detuning in that frame
};

[[nodiscard]] CwFixedPoint mbe_cw_fixed_point(const MbeConfig& cfg);

/// Max-norm residual of the homogeneous stationary equations at the given
/// fixed point (evaluated in the pulled frame).
[[nodiscard]] double mbe_fixed_point_residual(const MbeConfig& cfg,
                                              const CwFixedPoint& fp);

struct MbeRunResult {
    Trajectory trajectory;
    std::vector<TimeSeries> outputs;  // spatial mean per mode ("A", "B")
    MbeState final_state;             // state at t_end, or at failure
    std::optional<RunError> error;
    std::vector<std::string> warnings;
};

/// Integrates for round(t_end / dt) steps. Deterministic; blow-ups are
/// reported in `error` with the partial trajectory retained. An inversion
/// excursion beyond |d0_over_chi| + 1 is recorded as a warning.
[[nodiscard]] MbeRunResult run_mbe(const MbeConfig& cfg, MbeState init);

}  // namespace maser
