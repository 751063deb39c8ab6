#include "maser/params.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "maser/errors.hpp"

namespace maser {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw DomainError(std::string(name) + " must be strictly positive");
}

}  // namespace

void PhysicalParams::validate() const {
    require_positive(omega_a, "omega_a");
    for (int m = 0; m < 2; ++m) {
        require_positive(omega_m[m], "omega_m");
        require_positive(g_m[m], "g_m");
        require_positive(gamma_m[m], "gamma_m");
    }
    require_positive(gamma_E, "gamma_E");
    require_positive(gamma_D, "gamma_D");
    require_positive(gamma_P, "gamma_P");
    require_positive(c_eff, "c_eff");
    require_positive(radius, "radius");
    if (!std::isfinite(omega_0))
        throw DomainError("omega_0 must be finite");
}

PhysicalParams default_physical_params() {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    PhysicalParams p;
    p.omega_a = two_pi * ModeTable::readout_mode_a_hz;
    p.omega_m = {two_pi * ModeTable::readout_mode_a_hz,
                 two_pi * ModeTable::readout_mode_b_hz};
    // Collective coupling and photon loss chosen so the pump sits a few
    // times above threshold: 4 g^2 d0 / (gamma gamma_a) ~ 5.
    p.g_m = {two_pi * 8.0e3, two_pi * 8.0e3};
    p.gamma_m = {380.0, 420.0};             // Q ~ 2e8
    p.gamma_P = two_pi * 50.0e3;
    p.gamma_D = two_pi * 40.0e3;
    p.gamma_E = two_pi * 10.0e3;
    p.c_eff = 9.7e7;                        // microwave index ~ 3.1
    p.radius = 0.025;
    p.omega_0 = p.omega_a;                  // atom frame by default
    return p;
}

ScalingConstants derive_scalings(double g, double gamma, double gamma_a,
                                 double gamma_I, double C) {
    require_positive(g, "g");
    require_positive(gamma, "gamma");
    require_positive(gamma_a, "gamma_a");
    require_positive(gamma_I, "gamma_I");
    require_positive(C, "C");

    const double root = std::sqrt(gamma_I * gamma_a / 2.0);
    ScalingConstants s;
    s.zeta = -root / (2.0 * g);
    s.xi = C * gamma * root / (2.0 * g * g);
    s.chi = -C * gamma * gamma_a / (2.0 * g * g);
    s.C = C;
    return s;
}

std::array<double, 3> scaling_residuals(const ScalingConstants& s, double g,
                                        double gamma, double gamma_a,
                                        double gamma_I) {
    const double lhs1 = 2.0 * g * s.xi / (gamma * s.zeta);
    const double lhs2 = 2.0 * g * s.chi * s.zeta / (gamma_a * s.xi);
    const double lhs3 = 2.0 * g * s.xi * s.zeta / (gamma_I * s.chi);
    return {std::abs(lhs1 / (-2.0 * s.C) - 1.0), std::abs(lhs2 - 1.0),
            std::abs(lhs3 / 0.5 - 1.0)};
}

NormalizedParams to_normalized(const PhysicalParams& phys, int mode_index,
                               double C) {
    phys.validate();
    require_positive(C, "C");
    if (mode_index != 1 && mode_index != 2)
        throw DomainError("mode_index must be 1 or 2");

    const int m = mode_index - 1;
    const double omega = phys.omega_m[static_cast<std::size_t>(m)];
    const double gamma = phys.gamma_m[static_cast<std::size_t>(m)];
    const double g = phys.g_m[static_cast<std::size_t>(m)];
    const double gamma_a = phys.gamma_a();
    const double gamma_I = phys.gamma_I();

    const double detuning_mode = phys.omega_0 - omega;       // Omega
    const double detuning_atom = phys.omega_0 - phys.omega_a;  // Omega_a
    if (detuning_atom == 0.0)
        throw DomainError(
            "singular detuning: omega_0 equals omega_a, so the atomic "
            "detuning is zero");

    NormalizedParams n;
    n.theta = 2.0 * detuning_mode / gamma;
    n.delta = 2.0 * detuning_atom / gamma_a;
    n.C = C;
    n.eta = -std::abs(n.delta) / n.delta;
    n.theta0 = n.theta - 2.0 * C / n.delta;
    n.beta = 2.0 * C * gamma_a * phys.c_eff * phys.c_eff /
             (std::pow(std::abs(detuning_atom), 3) * phys.radius * phys.radius);

    const ScalingConstants s = derive_scalings(g, gamma, gamma_a, gamma_I, C);
    n.d0_over_chi = phys.d0() / s.chi;
    return n;
}

double thermal_occupation(double nu_hz, double temperature_k) {
    require_positive(nu_hz, "nu");
    require_positive(temperature_k, "T");
    const double x = k_planck * nu_hz / (k_boltzmann * temperature_k);
    // 1/(e^x + 1), written to stay accurate for large x
    return std::exp(-x) / (1.0 + std::exp(-x));
}

double pump_delivery(double pump_power_w, double delta_fp_hz, double fwhm_hz) {
    if (pump_power_w < 0.0) throw DomainError("pump power must be >= 0");
    require_positive(fwhm_hz, "fwhm");
    const double u = 2.0 * delta_fp_hz / fwhm_hz;
    return pump_power_w / (1.0 + u * u);
}

double pump_to_d0(double delivered_w, double sat_power_w, double d0_max) {
    if (delivered_w < 0.0) throw DomainError("delivered power must be >= 0");
    require_positive(sat_power_w, "sat_power");
    if (!(std::abs(d0_max) < 1.0))
        throw DomainError("|d0_max| must be < 1");
    return d0_max * delivered_w / (delivered_w + sat_power_w);
}

}  // namespace maser
