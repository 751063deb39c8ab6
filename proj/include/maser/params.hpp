#pragma once

#include <array>

namespace maser {

// Exact SI defining constants.
inline constexpr double k_planck = 6.62607015e-34;     // J s
inline constexpr double k_boltzmann = 1.380649e-23;    // J/K

/// Target whispering-gallery modes, bundled as versioned constants.
/// Mode A is tabulated at 12.03812 GHz (also quoted elsewhere as
/// 12.03813 GHz; the tabulated value is canonical here).
struct ModeTable {
    static constexpr int version = 1;
    static constexpr double pump_mode_hz[2] = {31.33771e9, 31.33974e9};
    static constexpr double readout_mode_a_hz = 12.03812e9;
    static constexpr double readout_mode_b_hz = 12.02979e9;
};

/// Dimensional maser parameters. Angular frequencies and rates in rad/s,
/// lengths in m, velocities in m/s.
///
/// gamma_I, gamma_a and d0 are derived accessors, never stored, so the
/// aggregate rates cannot drift out of sync with their components.
struct PhysicalParams {
    double omega_a = 0.0;                   // spin transition
    std::array<double, 2> omega_m{};        // signal modes 1, 2
    std::array<double, 2> g_m{};            // spin-photon couplings
    std::array<double, 2> gamma_m{};        // photonic loss rates
    double gamma_E = 0.0;                   // TLS emission rate
    double gamma_D = 0.0;                   // TLS decoherence rate
    double gamma_P = 0.0;                   // TLS pump rate
    double c_eff = 0.0;                     // effective light velocity
    double radius = 0.0;                    // ring radius
    double omega_0 = 0.0;                   // rotating-frame reference

    [[nodiscard]] double gamma_I() const { return gamma_P + gamma_D; }
    [[nodiscard]] double gamma_a() const { return gamma_P + gamma_D + gamma_E; }
    [[nodiscard]] double d0() const {
        return (gamma_P - gamma_D) / (gamma_P + gamma_D);
    }

    /// Throws DomainError if any rate, the radius or the velocity is not
    /// strictly positive.
    void validate() const;
};

/// Illustrative default parameter set: places the system a few times above
/// the lasing threshold with photon loss far below the spin losses
/// (gamma_m << gamma_a). Not fitted to any measurement.
[[nodiscard]] PhysicalParams default_physical_params();

/// Rescaling constants (F -> zeta F, J -> xi J, D -> chi D) plus the
/// cooperativity they were derived for.
struct ScalingConstants {
    double zeta = 0.0;
    double xi = 0.0;
    double chi = 0.0;
    double C = 0.0;
};

/// Dimensionless parameters of the normalized field/polarization/inversion
/// system and of the ring-cavity envelope equation derived from it.
struct NormalizedParams {
    double theta = 0.0;        // mode detuning, 2*Omega/gamma
    double delta = 0.0;        // atomic detuning, 2*Omega_a/gamma_a
    double C = 0.0;            // cooperativity
    double d0_over_chi = 0.0;  // scaled pump parameter
    double eta = 0.0;          // -|delta|/delta, +1 or -1
    double theta0 = 0.0;       // theta - 2C/delta
    double beta = 0.0;         // dispersion coefficient
};

/// Scaling constants zeta = -(1/2g) sqrt(gamma_I gamma_a / 2),
/// xi = (C gamma / 2g^2) sqrt(gamma_I gamma_a / 2),
/// chi = -C gamma gamma_a / (2 g^2). The results satisfy
///   2 g xi / (gamma zeta)    = -2C
///   2 g chi zeta / (gamma_a xi) = 1
///   2 g xi zeta / (gamma_I chi) = 1/2
/// to 1e-12 relative.
[[nodiscard]] ScalingConstants derive_scalings(double g, double gamma,
                                               double gamma_a, double gamma_I,
                                               double C);

/// Residuals of the three scaling identities, each relative to its target.
[[nodiscard]] std::array<double, 3> scaling_residuals(const ScalingConstants& s,
                                                      double g, double gamma,
                                                      double gamma_a,
                                                      double gamma_I);

/// Dimensional -> dimensionless conversion for signal mode 1 or 2.
/// Detunings are taken against the rotating frame reference omega_0.
/// Throws DomainError when omega_0 == omega_a (zero atomic detuning).
[[nodiscard]] NormalizedParams to_normalized(const PhysicalParams& phys,
                                             int mode_index, double C);

/// Excited-state occupation n = 1 / (exp(h nu / kB T) + 1).
[[nodiscard]] double thermal_occupation(double nu_hz, double temperature_k);

/// Power reaching the pump transition when the drive sits delta_fp away
/// from a pump mode of the given linewidth: Lorentzian roll-off
/// p / (1 + (2 delta_fp / fwhm)^2).
[[nodiscard]] double pump_delivery(double pump_power_w, double delta_fp_hz,
                                   double fwhm_hz);

/// Saturation map from delivered power to the pump parameter:
/// d0_max * p / (p + p_sat).
[[nodiscard]] double pump_to_d0(double delivered_w, double sat_power_w,
                                double d0_max);

}  // namespace maser
