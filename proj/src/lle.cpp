#include "maser/lle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "maser/errors.hpp"
#include "maser/fft.hpp"
#include "maser/rng.hpp"

namespace maser {

namespace {

using cplx = std::complex<double>;

constexpr double k_two_pi = 2.0 * std::numbers::pi;

// phi1(z) = (exp(z) - 1) / z, series near zero
cplx phi1(cplx z) {
    if (std::abs(z) < 1e-6)
        return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
    return (std::exp(z) - 1.0) / z;
}

double max_abs(const std::vector<cplx>& f) {
    double m = 0.0;
    for (const auto& v : f) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(const std::vector<cplx>& f) {
    for (const auto& v : f)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

// Real roots of x^3 + c2 x^2 + c1 x + c0, Newton-polished.
std::vector<double> cubic_real_roots(double c2, double c1, double c0) {
    const double p = c1 - c2 * c2 / 3.0;
    const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    std::vector<double> roots;
    const double disc = -4.0 * p * p * p - 27.0 * q * q;
    if (disc > 0.0) {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg =
            std::clamp(3.0 * q / (p * m), -1.0, 1.0);  // = cos(3 phi)
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            roots.push_back(m * std::cos(phi - k_two_pi * k / 3.0) - c2 / 3.0);
    } else {
        double y;
        if (p == 0.0) {
            y = std::cbrt(-q);
        } else {
            const double s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
            const double u = std::cbrt(-q / 2.0 + s);
            const double v = std::cbrt(-q / 2.0 - s);
            y = u + v;
        }
        roots.push_back(y - c2 / 3.0);
    }
    for (double& x : roots) {
        for (int it = 0; it < 4; ++it) {
            const double f = ((x + c2) * x + c1) * x + c0;
            const double df = (3.0 * x + 2.0 * c2) * x + c1;
            if (df != 0.0) x -= f / df;
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace

void LleConfig::validate() const {
    if (grid_points < 16 || !fft::is_pow2(grid_points))
        throw ConfigError("grid_points must be a power of two >= 16");
    if (!(dt_bar > 0.0)) throw ConfigError("dt_bar must be > 0");
    if (!(t_bar_end >= 0.0)) throw ConfigError("t_bar_end must be >= 0");
    if (eta != 1.0 && eta != -1.0) throw ConfigError("eta must be +1 or -1");
    if (output_stride == 0) throw ConfigError("output_stride must be >= 1");
    if (!(blowup_threshold > 0.0))
        throw ConfigError("blowup_threshold must be > 0");
}

double lle_grid_phi(std::size_t j, std::size_t n) {
    return k_two_pi * static_cast<double>(j) / static_cast<double>(n);
}

RingField lle_init_zero(const LleConfig& cfg) {
    return RingField{std::vector<cplx>(cfg.grid_points, cplx{0.0, 0.0}), 0.0};
}

RingField lle_init_cw_noise(const LleConfig& cfg, cplx cw_level,
                            double noise_amplitude) {
    GaussianRng rng(cfg.noise_seed);
    RingField f = lle_init_zero(cfg);
    for (auto& v : f.samples) {
        const double re = rng.normal();
        const double im = rng.normal();
        v = cw_level + noise_amplitude * cplx{re, im};
    }
    return f;
}

RingField lle_init_sech(const LleConfig& cfg, double amplitude, double center) {
    RingField f = lle_init_zero(cfg);
    const double scale = amplitude / std::sqrt(cfg.beta);
    for (std::size_t j = 0; j < cfg.grid_points; ++j) {
        // wrap the offset into [-pi, pi) so the profile is grid-periodic
        double d = lle_grid_phi(j, cfg.grid_points) - center;
        d -= k_two_pi * std::floor(d / k_two_pi + 0.5);
        f.samples[j] = amplitude / std::cosh(scale * d);
    }
    return f;
}

LleStepper::LleStepper(const LleConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    const std::size_t n = cfg_.grid_points;
    const double loss = cfg_.loss_enabled ? 1.0 : 0.0;
    const double half_dt = cfg_.dt_bar / 2.0;
    linear_multiplier_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double k = static_cast<double>(fft::wavenumber(j, n));
        const cplx rate{-loss, -cfg_.theta0 - cfg_.eta * cfg_.beta * k * k / 2.0};
        linear_multiplier_[j] = std::exp(rate * half_dt);
    }
    // Spectral bin 0 of a spatially constant drive carries a factor n.
    const cplx rate0{-loss, -cfg_.theta0};
    drive_gain_ = static_cast<double>(n) * cfg_.drive_amplitude * half_dt *
                  phi1(rate0 * half_dt);
    spec_.resize(n);
    fine_.resize(2 * n);
}

void LleStepper::nonlinear_full(std::vector<cplx>& f) const {
    if (!cfg_.nonlinearity_enabled) return;
    const double tau = cfg_.eta * cfg_.dt_bar;
    if (!cfg_.dealias) {
        for (auto& v : f) v *= std::exp(cplx{0.0, tau * std::norm(v)});
        return;
    }
    // Rotate on a 2x zero-padded grid, then truncate back to the band.
    const std::size_t n = f.size();
    const std::size_t m = 2 * n;
    spec_ = f;
    fft::forward(spec_);
    std::fill(fine_.begin(), fine_.end(), cplx{0.0, 0.0});
    for (std::size_t j = 0; j < n / 2; ++j) fine_[j] = 2.0 * spec_[j];
    for (std::size_t j = n / 2 + 1; j < n; ++j) fine_[j + n] = 2.0 * spec_[j];
    fine_[n / 2] = spec_[n / 2];          // split Nyquist between +/- bands
    fine_[m - n / 2] = spec_[n / 2];
    fft::inverse(fine_);
    for (auto& v : fine_) v *= std::exp(cplx{0.0, tau * std::norm(v)});
    fft::forward(fine_);
    for (std::size_t j = 0; j < n / 2; ++j) spec_[j] = fine_[j] / 2.0;
    for (std::size_t j = n / 2 + 1; j < n; ++j) spec_[j] = fine_[j + n] / 2.0;
    spec_[n / 2] = (fine_[n / 2] + fine_[m - n / 2]) / 2.0;
    fft::inverse(spec_);
    f = spec_;
}

void LleStepper::linear_half(std::vector<cplx>& f) const {
    fft::forward(f);
    for (std::size_t j = 0; j < f.size(); ++j) f[j] *= linear_multiplier_[j];
    f[0] += drive_gain_;
    fft::inverse(f);
}

void LleStepper::step(RingField& state) {
    auto& f = state.samples;
    linear_half(f);
    nonlinear_full(f);
    linear_half(f);
    state.t_bar += cfg_.dt_bar;
    ++step_count_;
    const double m = max_abs(f);
    if (!(m <= cfg_.blowup_threshold) || !all_finite(f))
        throw BlowupError(step_count_, m);
}

RingField lle_step(const RingField& state, const LleConfig& cfg) {
    LleStepper stepper(cfg);
    RingField next = state;
    stepper.step(next);
    return next;
}

LleRunResult run_lle(const LleConfig& cfg, RingField init) {
    cfg.validate();
    if (init.samples.size() != cfg.grid_points)
        throw ConfigError("initial field length does not match grid_points");

    LleRunResult result;
    result.trajectory.grid_points = cfg.grid_points;
    result.trajectory.mode_count = 1;
    result.trajectory.circumference = k_two_pi;
    result.output.dt = cfg.dt_bar * static_cast<double>(cfg.output_stride);
    result.output.label = "lle";

    const auto steps =
        static_cast<std::size_t>(std::llround(cfg.t_bar_end / cfg.dt_bar));
    LleStepper stepper(cfg);
    RingField state = std::move(init);

    const auto record_snapshot = [&](const RingField& s) {
        result.trajectory.times.push_back(s.t_bar);
        result.trajectory.snapshots.push_back(s.samples);
    };
    const auto record_output = [&](const RingField& s) {
        cplx sum{0.0, 0.0};
        for (const auto& v : s.samples) sum += v;
        result.output.samples.push_back(sum /
                                        static_cast<double>(s.samples.size()));
    };

    record_snapshot(state);
    record_output(state);
    for (std::size_t i = 1; i <= steps; ++i) {
        try {
            stepper.step(state);
        } catch (const BlowupError& e) {
            result.error = RunError{i, e.max_abs, e.what()};
            result.final_state = std::move(state);
            return result;
        }
        if (cfg.snapshot_stride != 0 && i % cfg.snapshot_stride == 0 &&
            i != steps)
            record_snapshot(state);
        if (i % cfg.output_stride == 0) record_output(state);
        if (i == steps) record_snapshot(state);
    }
    result.final_state = std::move(state);
    return result;
}

std::vector<cplx> lle_cw_states(const LleConfig& cfg) {
    cfg.validate();
    const cplx d = cfg.drive_amplitude;
    if (d == cplx{0.0, 0.0}) return {cplx{0.0, 0.0}};

    const double a = cfg.loss_enabled ? 1.0 : 0.0;
    const double t0 = cfg.theta0;
    const double eta = cfg.eta;
    // |d|^2 = (a^2 + (theta0 - eta X)^2) X with X = |F|^2
    const auto roots = cubic_real_roots(-2.0 * eta * t0, a * a + t0 * t0,
                                        -std::norm(d));
    std::vector<cplx> states;
    for (double x : roots) {
        if (x < -1e-12) continue;
        x = std::max(x, 0.0);
        const bool duplicate =
            std::any_of(states.begin(), states.end(), [&](const cplx& s) {
                return std::abs(std::norm(s) - x) <=
                       1e-9 * std::max(1.0, std::abs(x));
            });
        if (duplicate) continue;
        const cplx denom = cplx{a, t0} - cplx{0.0, eta * x};
        states.push_back(d / denom);
    }
    std::sort(states.begin(), states.end(), [](const cplx& u, const cplx& v) {
        return std::norm(u) < std::norm(v);
    });
    return states;
}

}  // namespace maser
