// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failed criteria. Each check reuses the oracle recipes proven in the
// per-module suites, with the tolerances stated on the printed line.
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "maser/analysis.hpp"
#include "maser/io.hpp"
#include "maser/lle.hpp"
#include "maser/mbe.hpp"
#include "maser/params.hpp"
#include "maser/presets.hpp"
#include "maser/rng.hpp"
#include "maser/sweep.hpp"

using namespace maser;
using nlohmann::json;
using cplx = std::complex<double>;

namespace {

constexpr double k_pi = std::numbers::pi;

int g_failures = 0;

void report(int idx, bool ok, const std::string& what) {
    std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", idx,
                what.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double norm_sq(const std::vector<cplx>& f) {
    double s = 0.0;
    for (const auto& v : f) s += std::norm(v);
    return s;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

double max_state_diff(const MbeState& a, const MbeState& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.fields.size(); ++i)
        for (std::size_t z = 0; z < a.fields[i].size(); ++z)
            m = std::max(m, std::abs(a.fields[i][z] - b.fields[i][z]));
    for (std::size_t p = 0; p < a.polarization.size(); ++p)
        for (std::size_t z = 0; z < a.polarization[p].size(); ++z) {
            m = std::max(m,
                         std::abs(a.polarization[p][z] - b.polarization[p][z]));
            m = std::max(m, std::abs(a.inversion[p][z] - b.inversion[p][z]));
        }
    return m;
}

RingField smooth_profile(const LleConfig& cfg, double amplitude) {
    RingField f = lle_init_zero(cfg);
    for (std::size_t j = 0; j < cfg.grid_points; ++j) {
        const double phi = lle_grid_phi(j, cfg.grid_points);
        f.samples[j] = amplitude * (1.0 + 0.8 * std::cos(phi) +
                                    cplx{0.0, 0.3} * std::sin(2.0 * phi));
    }
    return f;
}

TimeSeries sech_train(std::size_t n, double dt,
                      const std::vector<double>& centers, double amplitude,
                      double tau, double offset) {
    TimeSeries ts;
    ts.dt = dt;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) * dt;
        double y = offset;
        for (double c : centers) y += amplitude / std::cosh((t - c) / tau);
        ts.samples.emplace_back(y, 0.0);
    }
    return ts;
}

TimeSeries drop_transient(TimeSeries series, double fraction) {
    const auto drop = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(series.samples.size())));
    series.samples.erase(series.samples.begin(),
                         series.samples.begin() +
                             static_cast<std::ptrdiff_t>(drop));
    return series;
}

// ---------------------------------------------------------------------------

void criterion_1_occupation() {
    const double n_4k = thermal_occupation(31.34e9, 4.0);
    const double n_50mk = thermal_occupation(31.34e9, 0.05);
    const bool ok_hot = std::abs(n_4k - 0.41) <= 0.01;
    const bool ok_cold = std::abs(n_50mk / 8.643e-14 - 1.0) < 0.02;
    report(1, ok_hot && ok_cold,
           "thermal occupation at 31.34 GHz: n(4 K) = " + fmt(n_4k) +
               " (want 0.41 +- 0.01), n(50 mK) = " + fmt(n_50mk) +
               " (want 8.643e-14 +- 2%)");
}

void criterion_2_scaling_identities() {
    GaussianRng rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        auto draw = [&] { return std::pow(10.0, 6.0 * rng.uniform() - 3.0); };
        const double g = draw(), gamma = draw(), gamma_a = draw(),
                     gamma_I = draw(), C = draw();
        const auto s = derive_scalings(g, gamma, gamma_a, gamma_I, C);
        const auto res = scaling_residuals(s, g, gamma, gamma_a, gamma_I);
        worst = std::max({worst, res[0], res[1], res[2]});
    }
    report(2, worst < 1e-12,
           "scaling identities over 1e4 random draws: worst relative "
           "residual " +
               fmt(worst) + " (want < 1e-12)");
}

void criterion_3_norm_decay() {
    LleConfig cfg;
    cfg.grid_points = 256;
    cfg.theta0 = 0.3;
    cfg.dt_bar = 1e-3;
    cfg.t_bar_end = 1.0;
    const RingField init = smooth_profile(cfg, 0.1);
    const double n0 = norm_sq(init.samples);
    const auto run = run_lle(cfg, init);
    const double ratio =
        run.error ? -1.0 : norm_sq(run.final_state.samples) / n0;
    const double err = std::abs(ratio / std::exp(-2.0) - 1.0);
    report(3, !run.error && err < 1e-8,
           "undriven norm decay at t_bar = 1 (dt 1e-3, 256 points): "
           "relative error vs exp(-2) is " +
               fmt(err) + " (want < 1e-8)");
}

void criterion_4_nls_soliton() {
    LleConfig cfg;
    cfg.grid_points = 512;
    cfg.theta0 = 0.0;
    cfg.eta = 1.0;
    cfg.beta = 1.0;
    cfg.loss_enabled = false;
    cfg.dt_bar = 1e-4;
    cfg.t_bar_end = 0.1;
    const double amp = 5.0;
    const RingField init = lle_init_sech(cfg, amp, k_pi);
    const auto run = run_lle(cfg, init);
    double mag_err = 0.0;
    double phase_err = 1e9;
    if (!run.error) {
        // magnitude profile is stationary; measured against the soliton
        // amplitude so the check tracks the profile's own scale
        for (std::size_t j = 0; j < cfg.grid_points; ++j)
            mag_err = std::max(
                mag_err, std::abs(std::abs(run.final_state.samples[j]) -
                                  std::abs(init.samples[j])));
        mag_err /= amp;
        const double expected_phase = amp * amp * cfg.t_bar_end / 2.0;
        const cplx peak = run.final_state.samples[cfg.grid_points / 2];
        phase_err = std::abs(std::arg(peak) - expected_phase);
    }
    report(4, !run.error && mag_err < 1e-6 && phase_err < 1e-4,
           "NLS soliton 5 sech(5 phi) at t_bar = 0.1 (512 points, dt 1e-4): "
           "magnitude-profile error " +
               fmt(mag_err) + " of the amplitude (want < 1e-6), "
               "phase-advance error " +
               fmt(phase_err) + " rad (want < 1e-4)");
}

void criterion_5_convergence_orders() {
    // Strang splitting on the driven-less ring: global error ~ dt^2.
    LleConfig lle_base;
    lle_base.grid_points = 128;
    lle_base.theta0 = 0.8;
    lle_base.beta = 0.5;
    lle_base.t_bar_end = 0.2;
    const auto lle_solve = [&](double dt) {
        LleConfig cfg = lle_base;
        cfg.dt_bar = dt;
        return run_lle(cfg, smooth_profile(cfg, 0.8)).final_state.samples;
    };
    const auto lle_ref = lle_solve(0.2 / 25600.0);
    const double lle_ratio = max_diff(lle_solve(0.2 / 100.0), lle_ref) /
                             max_diff(lle_solve(0.2 / 200.0), lle_ref);

    // RK4 on a smooth homogeneous two-level problem: global error ~ dt^4.
    MbeConfig mbe_base;
    mbe_base.grid_points = 2;
    mbe_base.c_eff = 0.0;
    mbe_base.modes[0].theta = 0.3;
    mbe_base.delta = -0.2;
    mbe_base.gamma_a = 3.0;
    mbe_base.gamma_I = 2.0;
    mbe_base.cooperativity = 1.5;
    mbe_base.d0_over_chi = -1.2;
    mbe_base.t_end = 1.0;
    const auto mbe_solve = [&](double dt) {
        MbeConfig cfg = mbe_base;
        cfg.dt = dt;
        MbeState init = mbe_init_zero(cfg);
        for (auto& v : init.fields[0]) v = cplx{0.8, 0.1};
        for (auto& v : init.polarization[0]) v = cplx{0.05, -0.02};
        for (auto& v : init.inversion[0]) v = -0.4;
        return run_mbe(cfg, std::move(init)).final_state;
    };
    const auto mbe_ref = mbe_solve(1.0 / 32768.0);
    const double mbe_ratio = max_state_diff(mbe_solve(1.0 / 64.0), mbe_ref) /
                             max_state_diff(mbe_solve(1.0 / 128.0), mbe_ref);

    report(5,
           lle_ratio > 3.5 && lle_ratio < 4.5 && mbe_ratio > 14.0 &&
               mbe_ratio < 18.0,
           "convergence orders under dt halving: ring splitting ratio " +
               fmt(lle_ratio) + " (want [3.5, 4.5]), RK4 ratio " +
               fmt(mbe_ratio) + " (want [14, 18])");
}

void criterion_6_mbe_fixed_point() {
    MbeConfig cfg;
    cfg.grid_points = 8;
    cfg.c_eff = 1.0;
    cfg.radius = 1.0;
    cfg.cooperativity = 1.0;
    cfg.d0_over_chi = -1.0;
    cfg.dt = 5e-3;
    cfg.t_end = 60.0;
    cfg.noise_seed = 11;
    const auto fp = mbe_cw_fixed_point(cfg);
    const double residual = mbe_fixed_point_residual(cfg, fp);

    const auto run = run_mbe(cfg, mbe_init_fixed_point(cfg, 0.01));
    double err = 1e9;
    if (!run.error) {
        // the relaxed state may carry an arbitrary global phase; align it
        // out before comparing (state scale is 1, so this is relative)
        err = 0.0;
        const auto& fs = run.final_state;
        for (std::size_t z = 0; z < cfg.grid_points; ++z) {
            const cplx phase = std::polar(1.0, -std::arg(fs.fields[0][z]));
            err = std::max(err, std::abs(fs.fields[0][z] * phase - fp.field));
            err = std::max(err, std::abs(fs.polarization[0][z] * phase -
                                         fp.polarization));
            err = std::max(err, std::abs(fs.inversion[0][z] - fp.inversion));
        }
    }
    report(6, residual < 1e-10 && !run.error && err < 1e-6,
           "closed-form masing state (C = 1, resonant, d0/chi = -1): "
           "equation residual " +
               fmt(residual) + " (want < 1e-10); return from a 1% kick "
               "within " +
               fmt(err) + " (want < 1e-6)");
}

void criterion_7_threshold_bracket() {
    SweepPlan plan;
    plan.solver = SolverKind::mbe;
    plan.base_config = json{
        {"modes", json::array({json{{"theta", 0.0},
                                    {"gamma", 1.0},
                                    {"coupling_weight", 1.0}}})},
        {"delta", 0.0},
        {"gamma_a", 1.0},
        {"gamma_I", 1.0},
        {"cooperativity", 1.0},
        {"d0_over_chi", -0.1},
        {"grid_points", 4},
        {"c_eff", 0.0},
        {"dt", 0.01},
        {"t_end", 50.0},
        {"output_stride", 10},
    };
    std::vector<double> values;
    for (int i = 0; i <= 20; ++i)
        values.push_back(-0.06 - 0.045 * static_cast<double>(i));
    plan.axes = {{"/d0_over_chi", values}};
    plan.init = {"fixed_point", 0.01};

    const SweepResult result = run_sweep(plan);
    const auto transitions = boundary_scan(result);
    std::size_t label_changes = 0;
    bool bracketed = false;
    double lo = 0.0, hi = 0.0;
    for (const auto& t : transitions) {
        if (!t.label_changed) continue;
        ++label_changes;
        lo = std::abs(values[t.position]);
        hi = std::abs(values[t.position + 1]);
        bracketed = lo <= 0.5 && 0.5 <= hi;
    }
    report(7, label_changes == 1 && bracketed,
           "lasing threshold on a 21-point pump sweep (C = 1): one regime "
           "change, between |d0/chi| = " +
               fmt(lo) + " and " + fmt(hi) +
               " (analytic threshold 0.5 within one grid step)");
}

void criterion_8_preset_taxonomy() {
    bool have_cw = false, have_pulsing = false;
    std::string detail;
    for (const auto& preset : preset_bank()) {
        if (preset.solver != SolverKind::mbe) continue;
        std::map<RegimeLabel, int> votes;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            MbeConfig cfg = io::mbe_config_from_json(preset.config);
            cfg.noise_seed = seed;
            MbeState init =
                preset.init.kind == "fixed_point"
                    ? mbe_init_fixed_point(cfg, preset.init.amplitude)
                    : (preset.init.kind == "zero"
                           ? mbe_init_zero(cfg)
                           : mbe_init_noise(cfg, preset.init.amplitude));
            const auto run = run_mbe(cfg, std::move(init));
            if (run.error) continue;
            const auto report_ = classify_regime(
                drop_transient(run.outputs[0], preset.discard_fraction), {});
            ++votes[report_.label];
        }
        auto top = std::max_element(
            votes.begin(), votes.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
        if (top == votes.end()) continue;
        detail += (detail.empty() ? "" : ", ") + preset.name + " -> " +
                  to_string(top->first) + " " + std::to_string(top->second) +
                  "/10";
        if (top->second >= 9) {
            if (top->first == RegimeLabel::cw_iii) have_cw = true;
            if (top->first == RegimeLabel::sparse_i ||
                top->first == RegimeLabel::dense_ii)
                have_pulsing = true;
        }
    }
    report(8, have_cw && have_pulsing,
           "preset bank regimes over seeds 1-10 (label stable >= 9/10, "
           "need one CW and one self-pulsing): " +
               detail);
}

void criterion_9_analysis_pipeline() {
    // (a) sech width recovery at the 1% noise level
    const double amplitude = 2.0, center = 1.0, tau = 0.05, offset = 0.2;
    std::vector<double> errors;
    bool fits_ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        GaussianRng rng(9000 + static_cast<std::uint64_t>(trial));
        auto ts = sech_train(1000, 0.002, {center}, amplitude, tau, offset);
        for (auto& s : ts.samples) s += 0.01 * amplitude * rng.normal();
        auto windows = detect_pulses(ts, 0.3);
        if (windows.empty()) {
            fits_ok = false;
            break;
        }
        const auto best = std::max_element(
            windows.begin(), windows.end(),
            [](const PulseWindow& a, const PulseWindow& b) {
                return a.peak_value < b.peak_value;
            });
        const auto fit = fit_sech(ts, *best);
        fits_ok = fits_ok && fit.converged;
        errors.push_back(std::abs(fit.width - tau) / tau);
    }
    std::sort(errors.begin(), errors.end());
    const double median = errors.empty() ? 1.0 : errors[errors.size() / 2];

    // (b) comb line spacing of an 8-period train
    const std::size_t n = 1024;
    const double dt = 0.01, period = 128.0 * dt;
    std::vector<double> centers;
    for (int i = 0; i < 8; ++i)
        centers.push_back((static_cast<double>(i) + 0.5) * period);
    const auto train = sech_train(n, dt, centers, 1.0, 0.06, 0.0);
    const auto spec = comb_spectrum(train, WindowFn::rectangular);
    const double bin_width = 1.0 / (static_cast<double>(n) * dt);
    const double spacing_err = std::abs(spec.line_spacing - 1.0 / period);

    // (c) Parseval residual, windowed energy vs spectral sum
    double total = 0.0, energy = 0.0;
    const auto hann = comb_spectrum(train, WindowFn::hann);
    for (double p : hann.power) total += p;
    for (std::size_t j = 0; j < n; ++j) {
        const double w =
            0.5 * (1.0 - std::cos(2.0 * k_pi * static_cast<double>(j) /
                                  static_cast<double>(n)));
        energy += std::norm(train.samples[j] * w);
    }
    const double parseval = std::abs(total - energy) / energy;

    report(9,
           fits_ok && median < 0.02 && spec.lines.size() >= 5 &&
               spacing_err <= bin_width && parseval < 1e-9,
           "analysis pipeline: median sech-width error at 1% noise " +
               fmt(median) + " (want < 0.02, 100 trials); comb spacing off "
               "by " +
               fmt(spacing_err) + " Hz from 1/T (want <= " + fmt(bin_width) +
               ", one bin); Parseval residual " + fmt(parseval) +
               " (want < 1e-9)");
}

void criterion_10_determinism() {
    SweepPlan plan;
    plan.solver = SolverKind::mbe;
    plan.base_config = json{
        {"modes", json::array({json{{"theta", 0.0},
                                    {"gamma", 1.0},
                                    {"coupling_weight", 1.0}}})},
        {"delta", 0.0},
        {"gamma_a", 1.0},
        {"gamma_I", 1.0},
        {"cooperativity", 1.0},
        {"d0_over_chi", -0.1},
        {"grid_points", 4},
        {"c_eff", 0.0},
        {"dt", 0.01},
        {"t_end", 50.0},
        {"output_stride", 10},
    };
    plan.axes = {{"/d0_over_chi", {-0.2, -0.4, -0.6, -0.8, -1.0}}};
    plan.init = {"noise", 1e-3};
    plan.seed_mode = SeedMode::per_point;
    plan.seed_base = 404;

    const std::string first =
        io::canonical_dump(io::sweep_result_to_json(run_sweep(plan)));
    const std::string second =
        io::canonical_dump(io::sweep_result_to_json(run_sweep(plan)));
    SweepPlan parallel = plan;
    parallel.threads = 4;
    const std::string threaded =
        io::canonical_dump(io::sweep_result_to_json(run_sweep(parallel)));
    report(10, first == second && first == threaded,
           "determinism: rerun summary JSON bit-identical (" +
               std::string(first == second ? "yes" : "NO") +
               "), 4-thread run matches serial (" +
               std::string(first == threaded ? "yes" : "NO") + ")");
}

}  // namespace

int main() {
    criterion_1_occupation();
    criterion_2_scaling_identities();
    criterion_3_norm_decay();
    criterion_4_nls_soliton();
    criterion_5_convergence_orders();
    criterion_6_mbe_fixed_point();
    criterion_7_threshold_bracket();
    criterion_8_preset_taxonomy();
    criterion_9_analysis_pipeline();
    criterion_10_determinism();
    if (g_failures == 0)
        std::printf("all 10 acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    return g_failures;
}
