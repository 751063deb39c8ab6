#include "maser/presets.hpp"

namespace maser {

namespace {

using nlohmann::json;

std::vector<Preset> build_bank() {
    std::vector<Preset> bank;

    // Steady masing with the field decaying much faster than the spins
    // (gamma/gamma_a = 10), pumped 3x above threshold. Started on the
    // uniform masing state with a 1% ripple; the ripple dies and every
    // seed settles back (see docs/PRESETS.md for the 10-seed table).
    // Noise starts are NOT label-stable here: the ring is multistable
    // and a traveling-wave winner leaves a near-zero ring average.
    bank.push_back(Preset{
        "cw-fast-field",
        "CW masing ring, field decay 10x the spin decay, 3x above "
        "threshold, started from a rippled masing state",
        SolverKind::mbe,
        json{{"modes", {{{"theta", 0.0}, {"gamma", 10.0},
                         {"coupling_weight", 1.0}}}},
             {"delta", 0.0},
             {"gamma_a", 1.0},
             {"gamma_I", 1.0},
             {"cooperativity", 2.0},
             {"d0_over_chi", -0.75},
             {"grid_points", 16},
             {"c_eff", 1.0},
             {"radius", 1.0},
             {"dt", 0.005},
             {"t_end", 300.0},
             {"spin", {{"count", 1}, {"spread", 0.0},
                       {"per_mode_packets", false}}},
             {"output_stride", 16}},
        SweepInit{"fixed_point", 0.01},
        0.5});

    // Same steady regime from the opposite corner: spins decaying far
    // faster than the field (gamma/gamma_a = 0.05), the rate-equation
    // limit, where relaxation oscillations damp onto the uniform state.
    bank.push_back(Preset{
        "cw-fast-spins",
        "CW masing ring, spin decay 20x the field decay, 3x above "
        "threshold, started from a rippled masing state",
        SolverKind::mbe,
        json{{"modes", {{{"theta", 0.0}, {"gamma", 0.5},
                         {"coupling_weight", 1.0}}}},
             {"delta", 0.0},
             {"gamma_a", 10.0},
             {"gamma_I", 5.0},
             {"cooperativity", 1.0},
             {"d0_over_chi", -1.5},
             {"grid_points", 16},
             {"c_eff", 1.0},
             {"radius", 1.0},
             {"dt", 0.005},
             {"t_end", 600.0},
             {"spin", {{"count", 1}, {"spread", 0.0},
                       {"per_mode_packets", false}}},
             {"output_stride", 32}},
        SweepInit{"fixed_point", 0.01},
        0.5});

    // Self-pulsing attractor in the bad-cavity corner: field decay above
    // both medium rates (gamma = 10, gamma_a = 2, gamma_I = 1) and pump
    // far past the second lasing threshold, where the uniform masing
    // state loses stability and the output spikes chaotically. In the
    // uniform limit this system maps onto the Lorenz equations with
    // sigma = gamma/gamma_a = 5, b = 2 gamma_I/gamma_a = 1, r = 2C|d0x|;
    // the scan in docs/PRESETS.md reproduces the predicted instability
    // onset r_2nd = sigma(sigma+b+3)/(sigma-b-1) = 15, and this preset
    // sits at r = 25, in the interior of the pulsing region.
    bank.push_back(Preset{
        "pulsing-bad-cavity",
        "chaotic self-pulsing ring, field decay above both medium rates, "
        "pump past the second threshold",
        SolverKind::mbe,
        json{{"modes", {{{"theta", 0.0}, {"gamma", 10.0},
                         {"coupling_weight", 1.0}}}},
             {"delta", 0.0},
             {"gamma_a", 2.0},
             {"gamma_I", 1.0},
             {"cooperativity", 5.0},
             {"d0_over_chi", -2.5},
             {"grid_points", 16},
             {"c_eff", 1.0},
             {"radius", 1.0},
             {"dt", 0.0005},
             {"t_end", 120.0},
             {"spin", {{"count", 1}, {"spread", 0.0},
                       {"per_mode_packets", false}}},
             {"output_stride", 40}},
        SweepInit{"fixed_point", 0.01},
        0.5});

    // Drive-free ring envelope demo: a bright sech pulse in the
    // anomalous-dispersion/focusing regime, decaying under the uniform
    // loss while keeping its shape.
    bank.push_back(Preset{
        "lle-sech-decay",
        "bright sech envelope on the lossy ring equation",
        SolverKind::lle,
        json{{"theta0", 0.0},
             {"eta", 1.0},
             {"beta", 1.0},
             {"grid_points", 512},
             {"dt_bar", 1e-4},
             {"t_bar_end", 1.0},
             {"output_stride", 10}},
        SweepInit{"sech", 5.0},
        0.0});

    return bank;
}

}  // namespace

const std::vector<Preset>& preset_bank() {
    static const std::vector<Preset> bank = build_bank();
    return bank;
}

const Preset* find_preset(const std::string& name) {
    for (const auto& p : preset_bank())
        if (p.name == name) return &p;
    return nullptr;
}

}  // namespace maser
