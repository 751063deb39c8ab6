#include "maser/sweep.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "maser/errors.hpp"
#include "maser/hash.hpp"
#include "maser/io.hpp"
#include "maser/lle.hpp"
#include "maser/mbe.hpp"

namespace maser {

namespace {

TimeSeries drop_transient(TimeSeries series, double discard_fraction) {
    const auto drop = static_cast<std::size_t>(std::floor(
        discard_fraction * static_cast<double>(series.samples.size())));
    series.samples.erase(series.samples.begin(),
                         series.samples.begin() +
                             static_cast<std::ptrdiff_t>(drop));
    return series;
}

// carry, when non-null, provides/receives the continuation state. An empty
// or shape-mismatched carry falls back to the plan's initial condition.
TimeSeries run_lle_point(const nlohmann::json& cfg_json, const SweepInit& init,
                         RingField* carry) {
    const LleConfig cfg = io::lle_config_from_json(cfg_json);
    RingField state;
    if (carry && carry->samples.size() == cfg.grid_points) {
        state = *carry;
        state.t_bar = 0.0;
    } else if (init.kind == "zero") {
        state = lle_init_zero(cfg);
    } else if (init.kind == "sech") {
        state = lle_init_sech(cfg, init.amplitude, 0.0);
    } else {
        state = lle_init_cw_noise(cfg, {0.0, 0.0}, init.amplitude);
    }

    LleRunResult run = run_lle(cfg, std::move(state));
    if (run.error) {
        if (carry) *carry = RingField{};  // do not cascade a blown state
        throw BlowupError(run.error->step, run.error->max_abs);
    }
    if (carry) *carry = std::move(run.final_state);
    return std::move(run.output);
}

TimeSeries run_mbe_point(const nlohmann::json& cfg_json, const SweepInit& init,
                         MbeState* carry) {
    const MbeConfig cfg = io::mbe_config_from_json(cfg_json);
    MbeState state;
    const bool carry_fits =
        carry && carry->fields.size() == cfg.mode_count() &&
        !carry->fields.empty() &&
        carry->fields[0].size() == cfg.grid_points &&
        carry->polarization.size() ==
            (cfg.spin.per_mode_packets ? cfg.spin.count * cfg.mode_count()
                                       : cfg.spin.count);
    if (carry_fits) {
        state = *carry;
        state.t = 0.0;
    } else if (init.kind == "zero") {
        state = mbe_init_zero(cfg);
    } else if (init.kind == "fixed_point") {
        state = mbe_init_fixed_point(cfg, init.amplitude);
    } else {
        state = mbe_init_noise(cfg, init.amplitude);
    }

    MbeRunResult run = run_mbe(cfg, std::move(state));
    if (run.error) {
        if (carry) *carry = MbeState{};
        throw BlowupError(run.error->step, run.error->max_abs);
    }
    if (carry) *carry = std::move(run.final_state);
    return std::move(run.outputs[0]);  // channel A is what gets classified
}

}  // namespace

void SweepPlan::validate() const {
    if (axes.empty() || axes.size() > 2)
        throw ConfigError("sweep: expected 1 or 2 axes, got " +
                          std::to_string(axes.size()));
    if (!base_config.is_object())
        throw ConfigError("sweep: base config must be a JSON object");
    for (const auto& axis : axes) {
        if (axis.values.empty())
            throw ConfigError("sweep: axis \"" + axis.parameter +
                              "\" has no values");
        for (const double v : axis.values)
            if (!std::isfinite(v))
                throw ConfigError("sweep: axis \"" + axis.parameter +
                                  "\" contains a non-finite value");
        try {
            (void)base_config.at(
                nlohmann::json::json_pointer(axis.parameter));
        } catch (const nlohmann::json::exception&) {
            throw ConfigError("sweep: parameter path \"" + axis.parameter +
                              "\" does not resolve in the base config");
        }
    }
    if (!(discard_fraction >= 0.0 && discard_fraction < 1.0))
        throw ConfigError("sweep: discard_fraction must be in [0, 1)");
    if (continuation && axes.size() != 1)
        throw ConfigError("sweep: continuation mode requires a single axis");

    const bool is_lle = solver == SolverKind::lle;
    const bool ok = init.kind == "zero" || init.kind == "noise" ||
                    (is_lle ? init.kind == "sech"
                            : init.kind == "fixed_point");
    if (!ok)
        throw ConfigError("sweep: init kind \"" + init.kind +
                          "\" is not valid for this solver");
}

std::vector<std::size_t> SweepPlan::shape() const {
    std::vector<std::size_t> s;
    s.reserve(axes.size());
    for (const auto& axis : axes) s.push_back(axis.values.size());
    return s;
}

std::size_t SweepPlan::point_count() const {
    std::size_t n = 1;
    for (const auto& axis : axes) n *= axis.values.size();
    return n;
}

std::uint64_t SweepPlan::hash() const {
    nlohmann::json j = io::sweep_plan_to_json(*this);
    j.erase("threads");  // worker count must not change the numbers
    return fnv1a64(io::canonical_dump(j));
}

SweepResult run_sweep(const SweepPlan& plan) {
    plan.validate();

    SweepResult result;
    result.shape = plan.shape();
    result.axes = plan.axes;
    result.config_hash = plan.hash();
    result.version = io::k_version;
    const std::size_t total = plan.point_count();
    result.points.resize(total);

    const auto coords_of = [&](std::size_t idx) {
        std::vector<double> c(plan.axes.size(), 0.0);
        std::size_t rem = idx;
        for (std::size_t a = plan.axes.size(); a-- > 0;) {
            const std::size_t n = plan.axes[a].values.size();
            c[a] = plan.axes[a].values[rem % n];
            rem /= n;
        }
        return c;
    };

    // run_point touches only its own slot, so workers need no locking and
    // the assembled grid is independent of scheduling order.
    const auto run_point = [&](std::size_t idx, RingField* lle_carry,
                               MbeState* mbe_carry) {
        SweepPoint& point = result.points[idx];
        point.index = idx;
        point.coords = coords_of(idx);
        point.seed = plan.seed_mode == SeedMode::fixed
                         ? plan.seed_base
                         : plan.seed_base + idx;
        try {
            nlohmann::json cfg_json = plan.base_config;
            for (std::size_t a = 0; a < plan.axes.size(); ++a)
                cfg_json[nlohmann::json::json_pointer(
                    plan.axes[a].parameter)] = point.coords[a];
            cfg_json["noise_seed"] = point.seed;

            TimeSeries output =
                plan.solver == SolverKind::lle
                    ? run_lle_point(cfg_json, plan.init, lle_carry)
                    : run_mbe_point(cfg_json, plan.init, mbe_carry);
            TimeSeries tail =
                drop_transient(std::move(output), plan.discard_fraction);
            point.report = classify_regime(tail, plan.thresholds);
            if (plan.keep_outputs) point.output = std::move(tail);
        } catch (const std::exception& e) {
            point.failed = true;
            point.error = e.what();
        }
    };

    if (plan.continuation) {
        RingField lle_carry;
        MbeState mbe_carry;
        for (std::size_t i = 0; i < total; ++i)
            run_point(i, &lle_carry, &mbe_carry);
        return result;
    }

    unsigned workers = plan.threads != 0
                           ? plan.threads
                           : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, total));
    if (workers <= 1) {
        for (std::size_t i = 0; i < total; ++i)
            run_point(i, nullptr, nullptr);
        return result;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < total;
                 i = next.fetch_add(1))
                run_point(i, nullptr, nullptr);
        });
    for (auto& t : pool) t.join();
    return result;
}

std::vector<RegimeTransition> boundary_scan(const SweepResult& result,
                                            std::size_t axis,
                                            std::size_t other_index) {
    if (axis >= result.shape.size())
        throw DomainError("boundary_scan: axis out of range");
    if (result.shape.size() == 2 && other_index >= result.shape[1 - axis])
        throw DomainError("boundary_scan: slice index out of range");

    const std::size_t n = result.shape[axis];
    const auto linear = [&](std::size_t i) {
        if (result.shape.size() == 1) return i;
        return axis == 0 ? i * result.shape[1] + other_index
                         : other_index * result.shape[1] + i;
    };

    std::vector<RegimeTransition> transitions;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const SweepPoint& a = result.points[linear(i)];
        const SweepPoint& b = result.points[linear(i + 1)];
        if (a.failed || b.failed) continue;
        RegimeTransition t;
        t.position = i;
        t.label_before = a.report.label;
        t.label_after = b.report.label;
        t.pulses_before = a.report.pulse_count;
        t.pulses_after = b.report.pulse_count;
        t.label_changed = t.label_before != t.label_after;
        t.pulse_count_changed = t.pulses_before != t.pulses_after;
        if (t.label_changed || t.pulse_count_changed)
            transitions.push_back(t);
    }
    return transitions;
}

}  // namespace maser
