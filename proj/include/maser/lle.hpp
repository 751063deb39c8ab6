#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "maser/timeseries.hpp"

namespace maser {

/// Ring-cavity envelope equation on the angular coordinate phi in [0, 2pi):
///
///   dF/dt = -F - i*theta0*F + i*eta*(beta/2)*d^2F/dphi^2 + i*eta*|F|^2*F
///
/// integrated by Strang-split spectral steps. The drive term is an
/// explicitly-labeled extension (constant inhomogeneity in the linear
/// substep) for cross-checks against driven Kerr-comb behavior; it is off
/// by default and the equation above is the drive-free case.
struct LleConfig {
    double theta0 = 0.0;
    double eta = 1.0;   // +1 or -1
    double beta = 1.0;

    std::size_t grid_points = 256;  // power of two, >= 16
    double dt_bar = 1e-3;
    double t_bar_end = 1.0;

    std::complex<double> drive_amplitude{0.0, 0.0};  // extension, default off
    bool loss_enabled = true;
    bool dealias = true;
    bool nonlinearity_enabled = true;  // test hook for the linear multiplier
    std::uint64_t noise_seed = 0;

    std::size_t snapshot_stride = 0;  // 0: only first and last snapshot
    std::size_t output_stride = 1;    // output sample every N steps
    double blowup_threshold = 1e6;

    void validate() const;  // throws ConfigError
};

/// Complex field samples on the uniform phi grid.
struct RingField {
    std::vector<std::complex<double>> samples;
    double t_bar = 0.0;
};

/// phi coordinate of cell j.
[[nodiscard]] double lle_grid_phi(std::size_t j, std::size_t n);

// Initial condition generators.
[[nodiscard]] RingField lle_init_zero(const LleConfig& cfg);
[[nodiscard]] RingField lle_init_cw_noise(const LleConfig& cfg,
                                          std::complex<double> cw_level,
                                          double noise_amplitude);
/// Bright-soliton profile A*sech(A*(phi - center)/sqrt(beta)).
[[nodiscard]] RingField lle_init_sech(const LleConfig& cfg, double amplitude,
                                      double center);

/// Reusable stepper: owns the spectral multipliers and scratch buffers.
class LleStepper {
public:
    explicit LleStepper(const LleConfig& cfg);

    /// One Strang step of size dt_bar: half linear step in Fourier space
    /// (drive enters here), full nonlinear phase rotation, half linear
    /// step. This ordering carries a noticeably smaller error constant on
    /// soliton profiles than the rotation-first variant. Throws
    /// BlowupError past the threshold.
    void step(RingField& state);

    [[nodiscard]] const LleConfig& config() const { return cfg_; }

private:
    void nonlinear_full(std::vector<std::complex<double>>& f) const;
    void linear_half(std::vector<std::complex<double>>& f) const;

    LleConfig cfg_;
    std::vector<std::complex<double>> linear_multiplier_;  // per half step
    std::complex<double> drive_gain_;  // integrated drive term for bin 0
    std::size_t step_count_ = 0;
    mutable std::vector<std::complex<double>> spec_;
    mutable std::vector<std::complex<double>> fine_;
};

/// Single step as a pure function (convenience over LleStepper).
[[nodiscard]] RingField lle_step(const RingField& state, const LleConfig& cfg);

struct LleRunResult {
    Trajectory trajectory;
    TimeSeries output;  // spatial mean of the field, one sample per stride
    RingField final_state;  // state at t_bar_end, or at failure
    std::optional<RunError> error;
};

/// Integrates for round(t_bar_end / dt_bar) steps from the given state.
/// Deterministic; a blow-up terminates integration and is reported in
/// `error` with the partial trajectory retained.
[[nodiscard]] LleRunResult run_lle(const LleConfig& cfg, RingField init);

/// Homogeneous steady states. For zero drive the only state is F = 0;
/// with drive, the real roots of the driven cubic in |F|^2 are returned.
/// Every state has residual below 1e-10 in max norm.
[[nodiscard]] std::vector<std::complex<double>> lle_cw_states(
    const LleConfig& cfg);

}  // namespace maser
