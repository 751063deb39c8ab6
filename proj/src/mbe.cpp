#include "maser/mbe.hpp"

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

// How far |D| may exceed |d0_over_chi| before a run is flagged. Relaxation
// only pulls D toward the pump value, so a large excursion means the local
// stage is under-resolved.
constexpr double k_inversion_margin = 1.0;

void check_rate(double value, const char* name) {
    if (!(value > 0.0))
        throw ConfigError(std::string("mbe: ") + name + " must be positive");
}

// dst = x + a * k (shapes must already match).
void state_add_scaled(const MbeState& x, double a, const MbeState& k,
                      MbeState& dst) {
    for (std::size_t m = 0; m < x.fields.size(); ++m)
        for (std::size_t z = 0; z < x.fields[m].size(); ++z)
            dst.fields[m][z] = x.fields[m][z] + a * k.fields[m][z];
    for (std::size_t p = 0; p < x.polarization.size(); ++p)
        for (std::size_t z = 0; z < x.polarization[p].size(); ++z) {
            dst.polarization[p][z] =
                x.polarization[p][z] + a * k.polarization[p][z];
            dst.inversion[p][z] = x.inversion[p][z] + a * k.inversion[p][z];
        }
}

// dst += a * k.
void state_accumulate(MbeState& dst, double a, const MbeState& k) {
    for (std::size_t m = 0; m < dst.fields.size(); ++m)
        for (std::size_t z = 0; z < dst.fields[m].size(); ++z)
            dst.fields[m][z] += a * k.fields[m][z];
    for (std::size_t p = 0; p < dst.polarization.size(); ++p)
        for (std::size_t z = 0; z < dst.polarization[p].size(); ++z) {
            dst.polarization[p][z] += a * k.polarization[p][z];
            dst.inversion[p][z] += a * k.inversion[p][z];
        }
}

MbeState make_state_shape(const MbeConfig& cfg, std::size_t packet_rows) {
    MbeState s;
    s.fields.assign(cfg.mode_count(),
                    std::vector<cplx>(cfg.grid_points, cplx{0.0, 0.0}));
    s.polarization.assign(packet_rows,
                          std::vector<cplx>(cfg.grid_points, cplx{0.0, 0.0}));
    s.inversion.assign(packet_rows,
                       std::vector<double>(cfg.grid_points, 0.0));
    return s;
}

std::size_t packet_row_count(const MbeConfig& cfg) {
    return cfg.spin.per_mode_packets ? cfg.spin.count * cfg.mode_count()
                                     : cfg.spin.count;
}

}  // namespace

void MbeConfig::validate() const {
    if (modes.empty() || modes.size() > 2)
        throw ConfigError("mbe: expected 1 or 2 modes, got " +
                          std::to_string(modes.size()));
    if (modes[0].coupling_weight != 1.0)
        throw ConfigError(
            "mbe: mode 1 coupling_weight must be 1 (cooperativity is defined "
            "against it)");
    for (const auto& m : modes) {
        check_rate(m.gamma, "mode gamma");
        if (!(m.coupling_weight > 0.0))
            throw ConfigError("mbe: coupling_weight must be positive");
        if (!std::isfinite(m.theta))
            throw ConfigError("mbe: theta must be finite");
    }
    check_rate(gamma_a, "gamma_a");
    check_rate(gamma_I, "gamma_I");
    check_rate(cooperativity, "cooperativity");
    if (!std::isfinite(delta) || !std::isfinite(d0_over_chi))
        throw ConfigError("mbe: delta and d0_over_chi must be finite");
    if (grid_points < 2 || !fft::is_pow2(grid_points))
        throw ConfigError("mbe: grid_points must be a power of two >= 2");
    if (!(c_eff >= 0.0))
        throw ConfigError("mbe: c_eff must be non-negative");
    check_rate(radius, "radius");
    check_rate(dt, "dt");
    if (!(t_end >= 0.0)) throw ConfigError("mbe: t_end must be non-negative");
    if (spin.count == 0)
        throw ConfigError("mbe: spin packet count must be at least 1");
    if (!(spin.spread >= 0.0))
        throw ConfigError("mbe: spin spread must be non-negative");
    if (output_stride == 0)
        throw ConfigError("mbe: output_stride must be at least 1");
    if (!(blowup_threshold > 0.0))
        throw ConfigError("mbe: blowup_threshold must be positive");
}

double MbeConfig::circumference() const { return k_two_pi * radius; }

double MbeConfig::mode_cooperativity(std::size_t m) const {
    return cooperativity * modes[m].coupling_weight * modes[0].gamma /
           modes[m].gamma;
}

double MbeConfig::suggested_dt() const {
    double gamma_max = std::max(gamma_a, gamma_I);
    for (const auto& m : modes) gamma_max = std::max(gamma_max, m.gamma);
    const double dz = circumference() / static_cast<double>(grid_points);
    double dt_local = 0.1 / gamma_max;
    if (c_eff > 0.0) dt_local = std::min(dt_local, 0.1 * dz / c_eff);
    return dt_local;
}

std::vector<double> lorentzian_packet_offsets(std::size_t count,
                                              double spread) {
    // Midpoint inverse-CDF rule for the unit-weight Lorentzian
    // spread / (pi (spread^2 + x^2)): node i sits at the (i+1/2)/count
    // quantile, every node carrying weight 1/count.
    std::vector<double> offsets(count, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        const double u =
            (static_cast<double>(i) + 0.5) / static_cast<double>(count);
        offsets[i] = spread * std::tan(std::numbers::pi * (u - 0.5));
    }
    return offsets;
}

MbeState mbe_init_zero(const MbeConfig& cfg) {
    cfg.validate();
    MbeState s = make_state_shape(cfg, packet_row_count(cfg));
    for (auto& row : s.inversion)
        std::fill(row.begin(), row.end(), cfg.d0_over_chi);
    return s;
}

MbeState mbe_init_noise(const MbeConfig& cfg, double amplitude) {
    MbeState s = mbe_init_zero(cfg);
    GaussianRng rng(cfg.noise_seed);
    for (auto& field : s.fields)
        for (auto& v : field) v = amplitude * cplx{rng.normal(), rng.normal()};
    return s;
}

MbeState mbe_init_fixed_point(const MbeConfig& cfg, double rel_perturbation) {
    const CwFixedPoint fp = mbe_cw_fixed_point(cfg);
    MbeState s = make_state_shape(cfg, packet_row_count(cfg));
    GaussianRng rng(cfg.noise_seed);
    for (auto& v : s.fields[0]) {
        v = fp.field;
        if (rel_perturbation != 0.0)
            v += fp.field * rel_perturbation * cplx{rng.normal(), rng.normal()};
    }
    std::fill(s.polarization[0].begin(), s.polarization[0].end(),
              fp.polarization);
    std::fill(s.inversion[0].begin(), s.inversion[0].end(), fp.inversion);
    return s;
}

MbeStepper::MbeStepper(const MbeConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    const std::size_t n = cfg_.grid_points;

    // Exact half-step advection in the spectral basis: bin k picks up a
    // phase -c k dt / (2 R).
    advection_half_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double k = static_cast<double>(fft::wavenumber(j, n));
        const double phase = -cfg_.c_eff * k * 0.5 * cfg_.dt / cfg_.radius;
        advection_half_[j] = std::polar(1.0, phase);
    }

    const auto comb = lorentzian_packet_offsets(cfg_.spin.count,
                                                cfg_.spin.spread);
    const double weight = 1.0 / static_cast<double>(cfg_.spin.count);
    if (cfg_.spin.per_mode_packets) {
        for (std::size_t m = 0; m < cfg_.mode_count(); ++m)
            for (double off : comb) {
                packet_offsets_.push_back(off);
                packet_mode_.push_back(static_cast<int>(m));
                packet_weight_.push_back(weight);
            }
    } else {
        for (double off : comb) {
            packet_offsets_.push_back(off);
            packet_mode_.push_back(-1);
            packet_weight_.push_back(weight);
        }
    }

    k_ = make_state_shape(cfg_, packet_offsets_.size());
    stage_ = make_state_shape(cfg_, packet_offsets_.size());
    acc_ = make_state_shape(cfg_, packet_offsets_.size());
}

void MbeStepper::advect_half(MbeState& state) {
    if (cfg_.c_eff == 0.0) return;
    for (auto& field : state.fields) {
        fft::forward(field);
        for (std::size_t j = 0; j < field.size(); ++j)
            field[j] *= advection_half_[j];
        fft::inverse(field);
    }
}

void MbeStepper::local_rhs(const MbeState& s, MbeState& out) const {
    const std::size_t n = cfg_.grid_points;
    const std::size_t modes = cfg_.mode_count();
    const std::size_t packets = packet_offsets_.size();

    for (std::size_t z = 0; z < n; ++z) {
        // Shared source term: every mode contributes with its coupling
        // weight. With per-mode packets each packet instead sees only the
        // field it belongs to.
        cplx source{0.0, 0.0};
        for (std::size_t m = 0; m < modes; ++m)
            source += cfg_.modes[m].coupling_weight * s.fields[m][z];

        for (std::size_t m = 0; m < modes; ++m) {
            cplx pol_sum{0.0, 0.0};
            for (std::size_t p = 0; p < packets; ++p)
                if (packet_mode_[p] < 0 ||
                    packet_mode_[p] == static_cast<int>(m))
                    pol_sum += packet_weight_[p] * s.polarization[p][z];
            const auto& mode = cfg_.modes[m];
            out.fields[m][z] =
                -0.5 * mode.gamma *
                (cplx{1.0, mode.theta} * s.fields[m][z] +
                 2.0 * cfg_.mode_cooperativity(m) * pol_sum);
        }

        for (std::size_t p = 0; p < packets; ++p) {
            const cplx drive =
                packet_mode_[p] < 0
                    ? source
                    : cfg_.modes[static_cast<std::size_t>(packet_mode_[p])]
                              .coupling_weight *
                          s.fields[static_cast<std::size_t>(packet_mode_[p])]
                                  [z];
            const cplx j = s.polarization[p][z];
            const double d = s.inversion[p][z];
            out.polarization[p][z] =
                -0.5 * cfg_.gamma_a *
                (cplx{1.0, cfg_.delta + packet_offsets_[p]} * j - drive * d);
            out.inversion[p][z] =
                -cfg_.gamma_I * (d - cfg_.d0_over_chi +
                                 (std::conj(drive) * j).real());
        }
    }
}

void MbeStepper::step(MbeState& state) {
    advect_half(state);

    // Classical RK4 on the spatially local terms.
    const double dt = cfg_.dt;
    local_rhs(state, k_);                          // k1
    state_add_scaled(state, dt / 6.0, k_, acc_);   // acc = y + dt/6 k1
    state_add_scaled(state, dt / 2.0, k_, stage_);
    local_rhs(stage_, k_);                         // k2
    state_accumulate(acc_, dt / 3.0, k_);
    state_add_scaled(state, dt / 2.0, k_, stage_);
    local_rhs(stage_, k_);                         // k3
    state_accumulate(acc_, dt / 3.0, k_);
    state_add_scaled(state, dt, k_, stage_);
    local_rhs(stage_, k_);                         // k4
    state_accumulate(acc_, dt / 6.0, k_);
    std::swap(state.fields, acc_.fields);
    std::swap(state.polarization, acc_.polarization);
    std::swap(state.inversion, acc_.inversion);

    advect_half(state);
    state.t += dt;
    ++step_count_;

    double max_abs = 0.0;
    for (const auto& field : state.fields)
        for (const auto& v : field) max_abs = std::max(max_abs, std::abs(v));
    if (!std::isfinite(max_abs) || max_abs > cfg_.blowup_threshold)
        throw BlowupError(step_count_, max_abs);
}

MbeState mbe_step(const MbeState& state, const MbeConfig& cfg) {
    MbeStepper stepper(cfg);
    MbeState next = state;
    stepper.step(next);
    return next;
}

CwFixedPoint mbe_cw_fixed_point(const MbeConfig& cfg) {
    cfg.validate();
    if (cfg.mode_count() != 1 || cfg.spin.count != 1)
        throw DomainError(
            "cw fixed point is defined for a single mode and a single spin "
            "packet");

    const double gamma = cfg.modes[0].gamma;
    const double theta = cfg.modes[0].theta;

    CwFixedPoint fp;
    // Stationary oscillation settles at the loss-weighted compromise
    // between the mode and atomic detunings; in that frame the effective
    // detunings cancel (theta' = -delta').
    fp.pulled_frequency = -(theta + cfg.delta) * gamma * cfg.gamma_a /
                          (2.0 * (gamma + cfg.gamma_a));
    fp.pulled_theta = theta + 2.0 * fp.pulled_frequency / gamma;
    const double delta_eff = cfg.delta + 2.0 * fp.pulled_frequency /
                                             cfg.gamma_a;

    const double inversion =
        -(1.0 + delta_eff * delta_eff) / (2.0 * cfg.cooperativity);
    const double intensity =
        2.0 * cfg.cooperativity * (inversion - cfg.d0_over_chi);

    if (intensity > 0.0) {
        fp.lasing = true;
        fp.intensity = intensity;
        fp.inversion = inversion;
        fp.field = std::sqrt(intensity);  // real gauge
        fp.polarization =
            -cplx{1.0, fp.pulled_theta} * fp.field / (2.0 * cfg.cooperativity);
    } else {
        // Below (or at) threshold only the trivial equilibrium remains.
        fp.lasing = false;
        fp.inversion = cfg.d0_over_chi;
    }
    return fp;
}

double mbe_fixed_point_residual(const MbeConfig& cfg, const CwFixedPoint& fp) {
    const double delta_eff =
        cfg.delta + 2.0 * fp.pulled_frequency / cfg.gamma_a;
    const cplx field_eq = cplx{1.0, fp.pulled_theta} * fp.field +
                          2.0 * cfg.cooperativity * fp.polarization;
    const cplx pol_eq =
        cplx{1.0, delta_eff} * fp.polarization - fp.field * fp.inversion;
    const double inv_eq = fp.inversion - cfg.d0_over_chi +
                          (std::conj(fp.field) * fp.polarization).real();
    return std::max({std::abs(field_eq), std::abs(pol_eq),
                     std::abs(inv_eq)});
}

MbeRunResult run_mbe(const MbeConfig& cfg, MbeState init) {
    cfg.validate();
    const std::size_t rows = packet_row_count(cfg);
    if (init.fields.size() != cfg.mode_count() ||
        init.polarization.size() != rows || init.inversion.size() != rows)
        throw ConfigError("initial state shape does not match config");
    for (const auto& f : init.fields)
        if (f.size() != cfg.grid_points)
            throw ConfigError("initial state shape does not match config");

    MbeRunResult result;
    result.trajectory.grid_points = cfg.grid_points;
    result.trajectory.mode_count = cfg.mode_count();
    result.trajectory.circumference = cfg.circumference();
    static constexpr const char* k_labels[2] = {"A", "B"};
    for (std::size_t m = 0; m < cfg.mode_count(); ++m) {
        TimeSeries ts;
        ts.dt = cfg.dt * static_cast<double>(cfg.output_stride);
        ts.label = k_labels[m];
        result.outputs.push_back(std::move(ts));
    }

    const auto steps =
        static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    MbeStepper stepper(cfg);
    MbeState state = std::move(init);

    const auto record_snapshot = [&](const MbeState& s) {
        result.trajectory.times.push_back(s.t);
        std::vector<cplx> flat;
        flat.reserve(cfg.mode_count() * cfg.grid_points);
        for (const auto& field : s.fields)
            flat.insert(flat.end(), field.begin(), field.end());
        result.trajectory.snapshots.push_back(std::move(flat));
    };
    bool inversion_flagged = false;
    const auto record_output = [&](const MbeState& s) {
        for (std::size_t m = 0; m < cfg.mode_count(); ++m) {
            cplx sum{0.0, 0.0};
            for (const auto& v : s.fields[m]) sum += v;
            result.outputs[m].samples.push_back(
                sum / static_cast<double>(cfg.grid_points));
        }
        if (!inversion_flagged) {
            const double bound =
                std::abs(cfg.d0_over_chi) + k_inversion_margin;
            for (const auto& row : s.inversion)
                for (double d : row)
                    if (std::abs(d) > bound) {
                        result.warnings.push_back(
                            "inversion exceeded |d0_over_chi| + 1 at t = " +
                            std::to_string(s.t));
                        inversion_flagged = true;
                        return;
                    }
        }
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

}  // namespace maser
