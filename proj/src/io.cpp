#include "maser/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "maser/errors.hpp"
#include "maser/hash.hpp"

namespace maser::io {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string hash_hex(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

/// Typed, unknown-key-rejecting view over one JSON object. Every accessor
/// marks its key as consumed; finish() flags anything left over, naming the
/// offending path.
class SchemaReader {
public:
    SchemaReader(const json& j, std::string context)
        : j_(j), ctx_(std::move(context)) {
        if (!j_.is_object())
            throw ConfigError(ctx_ + ": expected a JSON object");
    }

    [[nodiscard]] bool has(const char* key) const { return j_.contains(key); }

    double number(const char* key) {
        require(key);
        return number_at(key);
    }
    double number(const char* key, double fallback) {
        if (!j_.contains(key)) return fallback;
        return number_at(key);
    }
    std::uint64_t unsigned_int(const char* key, std::uint64_t fallback) {
        if (!j_.contains(key)) return fallback;
        seen_.insert(key);
        const json& v = j_.at(key);
        // Positive literals parse as unsigned, but documents built in code
        // (or rewritten by other tools) carry signed integer types.
        if (!v.is_number_unsigned() &&
            !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            throw ConfigError(path(key) + ": expected a non-negative integer");
        return v.get<std::uint64_t>();
    }
    bool boolean(const char* key, bool fallback) {
        if (!j_.contains(key)) return fallback;
        seen_.insert(key);
        const json& v = j_.at(key);
        if (!v.is_boolean()) throw ConfigError(path(key) + ": expected a bool");
        return v.get<bool>();
    }
    std::string text(const char* key, const std::string& fallback) {
        if (!j_.contains(key)) return fallback;
        seen_.insert(key);
        const json& v = j_.at(key);
        if (!v.is_string())
            throw ConfigError(path(key) + ": expected a string");
        return v.get<std::string>();
    }
    /// Fixed-length numeric array (required).
    template <std::size_t N>
    std::array<double, N> number_array(const char* key) {
        require(key);
        seen_.insert(key);
        const json& v = j_.at(key);
        if (!v.is_array() || v.size() != N)
            throw ConfigError(path(key) + ": expected an array of " +
                              std::to_string(N) + " numbers");
        std::array<double, N> out{};
        for (std::size_t i = 0; i < N; ++i) {
            if (!v[i].is_number())
                throw ConfigError(path(key) + ": expected numbers");
            out[i] = v[i].get<double>();
        }
        return out;
    }
    /// Nested object/array; nullptr when absent.
    const json* child(const char* key) {
        if (!j_.contains(key)) return nullptr;
        seen_.insert(key);
        return &j_.at(key);
    }

    void finish() const {
        for (const auto& item : j_.items())
            if (seen_.find(item.key()) == seen_.end())
                throw ConfigError(ctx_ + ": unknown key \"" + item.key() +
                                  "\"");
    }

    [[nodiscard]] const std::string& context() const { return ctx_; }

private:
    void require(const char* key) {
        if (!j_.contains(key))
            throw ConfigError(ctx_ + ": missing required key \"" +
                              std::string(key) + "\"");
    }
    double number_at(const char* key) {
        seen_.insert(key);
        const json& v = j_.at(key);
        if (!v.is_number())
            throw ConfigError(path(key) + ": expected a number");
        return v.get<double>();
    }
    std::string path(const char* key) const { return ctx_ + "." + key; }

    const json& j_;
    std::string ctx_;
    std::set<std::string> seen_;
};

json timeseries_meta(const TimeSeries& ts) {
    return json{{"dt", ts.dt},
                {"label", ts.label},
                {"samples", ts.samples.size()},
                {"real_valued", ts.real_valued}};
}

}  // namespace

json load_json(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open " + path);
    try {
        return json::parse(file);
    } catch (const json::parse_error& e) {
        throw ConfigError("parse error in " + path + ": " + e.what());
    }
}

void save_json(const json& j, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw ConfigError("cannot write " + path);
    file << canonical_dump(j);
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

PhysicalParams physical_params_from_json(const json& j) {
    SchemaReader r(j, "params");
    PhysicalParams p;
    p.omega_a = r.number("omega_a");
    p.omega_m = r.number_array<2>("omega_m");
    p.g_m = r.number_array<2>("g_m");
    p.gamma_m = r.number_array<2>("gamma_m");
    p.gamma_E = r.number("gamma_E");
    p.gamma_D = r.number("gamma_D");
    p.gamma_P = r.number("gamma_P");
    p.c_eff = r.number("c_eff");
    p.radius = r.number("radius");
    p.omega_0 = r.number("omega_0");
    r.finish();
    p.validate();
    return p;
}

json physical_params_to_json(const PhysicalParams& p) {
    return json{{"omega_a", p.omega_a},
                {"omega_m", {p.omega_m[0], p.omega_m[1]}},
                {"g_m", {p.g_m[0], p.g_m[1]}},
                {"gamma_m", {p.gamma_m[0], p.gamma_m[1]}},
                {"gamma_E", p.gamma_E},
                {"gamma_D", p.gamma_D},
                {"gamma_P", p.gamma_P},
                {"c_eff", p.c_eff},
                {"radius", p.radius},
                {"omega_0", p.omega_0}};
}

LleConfig lle_config_from_json(const json& j) {
    SchemaReader r(j, "lle config");
    LleConfig cfg;
    cfg.theta0 = r.number("theta0", cfg.theta0);
    cfg.eta = r.number("eta", cfg.eta);
    cfg.beta = r.number("beta", cfg.beta);
    cfg.grid_points = r.unsigned_int("grid_points", cfg.grid_points);
    cfg.dt_bar = r.number("dt_bar", cfg.dt_bar);
    cfg.t_bar_end = r.number("t_bar_end", cfg.t_bar_end);
    if (r.has("drive_amplitude")) {
        const auto d = r.number_array<2>("drive_amplitude");
        cfg.drive_amplitude = {d[0], d[1]};
    }
    cfg.loss_enabled = r.boolean("loss_enabled", cfg.loss_enabled);
    cfg.dealias = r.boolean("dealias", cfg.dealias);
    cfg.nonlinearity_enabled =
        r.boolean("nonlinearity_enabled", cfg.nonlinearity_enabled);
    cfg.noise_seed = r.unsigned_int("noise_seed", cfg.noise_seed);
    cfg.snapshot_stride = r.unsigned_int("snapshot_stride",
                                         cfg.snapshot_stride);
    cfg.output_stride = r.unsigned_int("output_stride", cfg.output_stride);
    cfg.blowup_threshold = r.number("blowup_threshold", cfg.blowup_threshold);
    r.finish();
    cfg.validate();
    return cfg;
}

json lle_config_to_json(const LleConfig& cfg) {
    return json{
        {"theta0", cfg.theta0},
        {"eta", cfg.eta},
        {"beta", cfg.beta},
        {"grid_points", cfg.grid_points},
        {"dt_bar", cfg.dt_bar},
        {"t_bar_end", cfg.t_bar_end},
        {"drive_amplitude",
         {cfg.drive_amplitude.real(), cfg.drive_amplitude.imag()}},
        {"loss_enabled", cfg.loss_enabled},
        {"dealias", cfg.dealias},
        {"nonlinearity_enabled", cfg.nonlinearity_enabled},
        {"noise_seed", cfg.noise_seed},
        {"snapshot_stride", cfg.snapshot_stride},
        {"output_stride", cfg.output_stride},
        {"blowup_threshold", cfg.blowup_threshold}};
}

double pump_block_to_d0_over_chi(const json& pump) {
    SchemaReader r(pump, "pump");
    const double power = r.number("power_w");
    const double detuning = r.number("detuning_hz");
    const double linewidth = r.number("linewidth_hz");
    const double saturation = r.number("saturation_power_w");
    const double d0_max = r.number("d0_max");
    const double chi = r.number("chi");
    r.finish();
    if (chi == 0.0) throw ConfigError("pump.chi must be non-zero");
    const double delivered = pump_delivery(power, detuning, linewidth);
    return pump_to_d0(delivered, saturation, d0_max) / chi;
}

MbeConfig mbe_config_from_json(const json& j) {
    SchemaReader r(j, "mbe config");
    MbeConfig cfg;
    if (const json* modes = r.child("modes")) {
        if (!modes->is_array() || modes->empty())
            throw ConfigError("mbe config.modes: expected a non-empty array");
        cfg.modes.clear();
        for (std::size_t m = 0; m < modes->size(); ++m) {
            SchemaReader mr((*modes)[m],
                            "mbe config.modes[" + std::to_string(m) + "]");
            MbeModeConfig mode;
            mode.theta = mr.number("theta", mode.theta);
            mode.gamma = mr.number("gamma", mode.gamma);
            mode.coupling_weight =
                mr.number("coupling_weight", mode.coupling_weight);
            mr.finish();
            cfg.modes.push_back(mode);
        }
    }
    cfg.delta = r.number("delta", cfg.delta);
    cfg.gamma_a = r.number("gamma_a", cfg.gamma_a);
    cfg.gamma_I = r.number("gamma_I", cfg.gamma_I);
    cfg.cooperativity = r.number("cooperativity", cfg.cooperativity);

    const bool has_d0 = r.has("d0_over_chi");
    const json* pump = r.child("pump");
    if (pump && has_d0)
        throw ConfigError(
            "mbe config: give either d0_over_chi or a pump block, not both");
    if (pump)
        cfg.d0_over_chi = pump_block_to_d0_over_chi(*pump);
    else
        cfg.d0_over_chi = r.number("d0_over_chi", cfg.d0_over_chi);

    cfg.grid_points = r.unsigned_int("grid_points", cfg.grid_points);
    cfg.c_eff = r.number("c_eff", cfg.c_eff);
    cfg.radius = r.number("radius", cfg.radius);
    cfg.t_end = r.number("t_end", cfg.t_end);
    if (const json* spin = r.child("spin")) {
        SchemaReader sr(*spin, "mbe config.spin");
        cfg.spin.count = sr.unsigned_int("count", cfg.spin.count);
        cfg.spin.spread = sr.number("spread", cfg.spin.spread);
        cfg.spin.per_mode_packets =
            sr.boolean("per_mode_packets", cfg.spin.per_mode_packets);
        sr.finish();
    }
    cfg.noise_seed = r.unsigned_int("noise_seed", cfg.noise_seed);
    cfg.snapshot_stride =
        r.unsigned_int("snapshot_stride", cfg.snapshot_stride);
    cfg.output_stride = r.unsigned_int("output_stride", cfg.output_stride);
    cfg.blowup_threshold = r.number("blowup_threshold", cfg.blowup_threshold);
    // dt after the rate fields: the fallback depends on them.
    cfg.dt = r.has("dt") ? r.number("dt") : cfg.suggested_dt();
    r.finish();
    cfg.validate();
    return cfg;
}

json mbe_config_to_json(const MbeConfig& cfg) {
    json modes = json::array();
    for (const auto& m : cfg.modes)
        modes.push_back(json{{"theta", m.theta},
                             {"gamma", m.gamma},
                             {"coupling_weight", m.coupling_weight}});
    return json{{"modes", modes},
                {"delta", cfg.delta},
                {"gamma_a", cfg.gamma_a},
                {"gamma_I", cfg.gamma_I},
                {"cooperativity", cfg.cooperativity},
                {"d0_over_chi", cfg.d0_over_chi},
                {"grid_points", cfg.grid_points},
                {"c_eff", cfg.c_eff},
                {"radius", cfg.radius},
                {"dt", cfg.dt},
                {"t_end", cfg.t_end},
                {"spin",
                 {{"count", cfg.spin.count},
                  {"spread", cfg.spin.spread},
                  {"per_mode_packets", cfg.spin.per_mode_packets}}},
                {"noise_seed", cfg.noise_seed},
                {"snapshot_stride", cfg.snapshot_stride},
                {"output_stride", cfg.output_stride},
                {"blowup_threshold", cfg.blowup_threshold}};
}

RegimeThresholds regime_thresholds_from_json(const json& j) {
    SchemaReader r(j, "thresholds");
    RegimeThresholds t;
    t.power_floor = r.number("power_floor", t.power_floor);
    t.full_scale = r.number("full_scale", t.full_scale);
    t.cw_ratio = r.number("cw_ratio", t.cw_ratio);
    t.duty_split = r.number("duty_split", t.duty_split);
    t.dense_count = r.unsigned_int("dense_count", t.dense_count);
    t.pulse_threshold_frac =
        r.number("pulse_threshold_frac", t.pulse_threshold_frac);
    t.min_gap = r.unsigned_int("min_gap", t.min_gap);
    t.k_mad = r.number("k_mad", t.k_mad);
    r.finish();
    return t;
}

json regime_thresholds_to_json(const RegimeThresholds& t) {
    return json{{"power_floor", t.power_floor},
                {"full_scale", t.full_scale},
                {"cw_ratio", t.cw_ratio},
                {"duty_split", t.duty_split},
                {"dense_count", t.dense_count},
                {"pulse_threshold_frac", t.pulse_threshold_frac},
                {"min_gap", t.min_gap},
                {"k_mad", t.k_mad}};
}

SweepPlan sweep_plan_from_json(const json& j) {
    SchemaReader r(j, "sweep plan");
    SweepPlan plan;
    const std::string solver = r.text("solver", "mbe");
    if (solver == "lle")
        plan.solver = SolverKind::lle;
    else if (solver == "mbe")
        plan.solver = SolverKind::mbe;
    else
        throw ConfigError("sweep plan.solver: expected \"lle\" or \"mbe\"");

    const json* cfg = r.child("config");
    if (cfg == nullptr)
        throw ConfigError("sweep plan: missing required key \"config\"");
    plan.base_config = *cfg;

    const json* axes = r.child("axes");
    if (axes == nullptr || !axes->is_array())
        throw ConfigError("sweep plan: missing \"axes\" array");
    for (std::size_t a = 0; a < axes->size(); ++a) {
        SchemaReader ar((*axes)[a], "sweep plan.axes[" + std::to_string(a) +
                                        "]");
        SweepAxis axis;
        axis.parameter = ar.text("parameter", "");
        if (axis.parameter.empty())
            throw ConfigError(ar.context() +
                              ": missing required key \"parameter\"");
        const json* values = ar.child("values");
        if (values == nullptr || !values->is_array())
            throw ConfigError(ar.context() + ": missing \"values\" array");
        for (const auto& v : *values) {
            if (!v.is_number())
                throw ConfigError(ar.context() +
                                  ".values: expected numbers");
            axis.values.push_back(v.get<double>());
        }
        ar.finish();
        plan.axes.push_back(std::move(axis));
    }

    const std::string mode = r.text("seed_mode", "per_point");
    if (mode == "per_point")
        plan.seed_mode = SeedMode::per_point;
    else if (mode == "fixed")
        plan.seed_mode = SeedMode::fixed;
    else
        throw ConfigError(
            "sweep plan.seed_mode: expected \"per_point\" or \"fixed\"");
    plan.seed_base = r.unsigned_int("seed_base", plan.seed_base);

    if (const json* init = r.child("init")) {
        SchemaReader ir(*init, "sweep plan.init");
        plan.init.kind = ir.text("kind", plan.init.kind);
        plan.init.amplitude = ir.number("amplitude", plan.init.amplitude);
        ir.finish();
    }
    plan.discard_fraction =
        r.number("discard_fraction", plan.discard_fraction);
    if (const json* thresholds = r.child("thresholds"))
        plan.thresholds = regime_thresholds_from_json(*thresholds);
    plan.continuation = r.boolean("continuation", plan.continuation);
    plan.keep_outputs = r.boolean("keep_outputs", plan.keep_outputs);
    plan.threads = static_cast<unsigned>(
        r.unsigned_int("threads", plan.threads));
    r.finish();
    plan.validate();
    return plan;
}

json sweep_plan_to_json(const SweepPlan& plan) {
    json axes = json::array();
    for (const auto& axis : plan.axes)
        axes.push_back(
            json{{"parameter", axis.parameter}, {"values", axis.values}});
    return json{
        {"solver", plan.solver == SolverKind::lle ? "lle" : "mbe"},
        {"config", plan.base_config},
        {"axes", axes},
        {"seed_mode",
         plan.seed_mode == SeedMode::fixed ? "fixed" : "per_point"},
        {"seed_base", plan.seed_base},
        {"init", {{"kind", plan.init.kind}, {"amplitude", plan.init.amplitude}}},
        {"discard_fraction", plan.discard_fraction},
        {"thresholds", regime_thresholds_to_json(plan.thresholds)},
        {"continuation", plan.continuation},
        {"keep_outputs", plan.keep_outputs},
        {"threads", plan.threads}};
}

json normalized_to_json(const NormalizedParams& n, const ScalingConstants& s,
                        const std::array<double, 3>& residuals) {
    return json{{"theta", n.theta},
                {"delta", n.delta},
                {"C", n.C},
                {"d0_over_chi", n.d0_over_chi},
                {"eta", n.eta},
                {"theta0", n.theta0},
                {"beta", n.beta},
                {"zeta", s.zeta},
                {"xi", s.xi},
                {"chi", s.chi},
                {"identity_residuals",
                 {residuals[0], residuals[1], residuals[2]}}};
}

json regime_report_to_json(const RegimeReport& r) {
    return json{{"label", to_string(r.label)},
                {"mean_output", r.mean_output},
                {"std_output", r.std_output},
                {"pulse_count", r.pulse_count},
                {"duty_cycle", r.duty_cycle},
                {"periods",
                 {{"count", r.periods.count},
                  {"mean", r.periods.mean},
                  {"cv", r.periods.cv}}},
                {"p_peak", r.p_peak},
                {"p_peak_db", r.p_peak_db},
                {"comb_spacing", r.comb_spacing}};
}

json comb_spectrum_to_json(const CombSpectrum& s, bool include_bins) {
    json lines = json::array();
    for (const auto& line : s.lines)
        lines.push_back(json{
            {"frequency", line.frequency},
            {"power", line.power},
            {"power_db", 10.0 * std::log10(std::max(line.power, 1e-300))}});
    json out{{"lines", lines},
             {"line_spacing", s.line_spacing},
             {"noise_floor", s.noise_floor}};
    if (include_bins) {
        out["frequency"] = s.frequency;
        out["power"] = s.power;
    }
    return out;
}

json pulse_fit_to_json(const PulseFit& f) {
    return json{{"amplitude", f.amplitude}, {"center", f.center},
                {"width", f.width},         {"offset", f.offset},
                {"rms_residual", f.rms_residual}, {"converged", f.converged}};
}

json run_error_to_json(const RunError& e) {
    return json{
        {"step", e.step}, {"max_abs", e.max_abs}, {"message", e.message}};
}

json sweep_result_to_json(const SweepResult& r) {
    json axes = json::array();
    for (const auto& axis : r.axes)
        axes.push_back(
            json{{"parameter", axis.parameter}, {"values", axis.values}});
    json points = json::array();
    for (const auto& p : r.points) {
        json point{{"index", p.index},
                   {"coords", p.coords},
                   {"seed", p.seed},
                   {"failed", p.failed}};
        if (p.failed)
            point["error"] = p.error;
        else
            point["report"] = regime_report_to_json(p.report);
        if (p.output) point["output"] = timeseries_meta(*p.output);
        points.push_back(std::move(point));
    }
    return json{{"version", r.version},
                {"config_hash", hash_hex(r.config_hash)},
                {"shape", r.shape},
                {"axes", axes},
                {"points", points}};
}

void write_timeseries_csv(const TimeSeries& ts, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw ConfigError("cannot write " + path);
    file << "t,re,im\n";
    for (std::size_t i = 0; i < ts.samples.size(); ++i)
        file << fmt_double(static_cast<double>(i) * ts.dt) << ','
             << fmt_double(ts.samples[i].real()) << ','
             << fmt_double(ts.samples[i].imag()) << '\n';
}

TimeSeries read_timeseries_csv(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open " + path);
    std::string line;
    if (!std::getline(file, line))
        throw ConfigError(path + ": expected header \"t,re,im\"");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,re,im")
        throw ConfigError(path + ": expected header \"t,re,im\"");

    TimeSeries ts;
    std::vector<double> times;
    bool any_imag = false;
    std::size_t row = 1;
    while (std::getline(file, line)) {
        ++row;
        while (!line.empty() &&
               (line.back() == '\r' || line.back() == ' ' ||
                line.back() == '\t'))
            line.pop_back();
        if (line.empty()) continue;
        double t = 0.0, re = 0.0, im = 0.0;
        char trailing = '\0';
        // Exactly three fields: a fourth conversion means stray columns.
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf%c", &t, &re, &im,
                        &trailing) != 3)
            throw ConfigError(path + ": malformed row " +
                              std::to_string(row));
        times.push_back(t);
        ts.samples.emplace_back(re, im);
        if (im != 0.0) any_imag = true;
    }
    if (ts.samples.empty()) throw ConfigError(path + ": no samples");
    if (times.size() >= 2) {
        ts.dt = times[1] - times[0];
        if (!(ts.dt > 0.0))
            throw ConfigError(path + ": time column must increase");
        for (std::size_t i = 1; i < times.size(); ++i) {
            const double expected =
                times[0] + static_cast<double>(i) * ts.dt;
            if (std::abs(times[i] - expected) >
                1e-9 * std::max(1.0, std::abs(expected)))
                throw ConfigError(path + ": non-uniform sampling at row " +
                                  std::to_string(i + 2));
        }
    }
    ts.real_valued = !any_imag;
    return ts;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw ConfigError("cannot write " + path);
    file << "t,mode,cell,re,im\n";
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        const std::string t = fmt_double(traj.times[s]);
        for (std::size_t m = 0; m < traj.mode_count; ++m)
            for (std::size_t c = 0; c < traj.grid_points; ++c) {
                const auto& v = traj.snapshots[s][m * traj.grid_points + c];
                file << t << ',' << m << ',' << c << ','
                     << fmt_double(v.real()) << ',' << fmt_double(v.imag())
                     << '\n';
            }
    }
}

namespace {

constexpr char k_traj_magic[8] = {'M', 'A', 'S', 'E', 'R', 'T', 'R', 'J'};
constexpr std::uint32_t k_traj_version = 1;

template <typename T>
void write_pod(std::ofstream& f, const T& v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_pod(std::ifstream& f, const std::string& path) {
    T v{};
    if (!f.read(reinterpret_cast<char*>(&v), sizeof v))
        throw ConfigError(path + ": truncated trajectory file");
    return v;
}

}  // namespace

void write_trajectory_bin(const Trajectory& traj, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot write " + path);
    file.write(k_traj_magic, sizeof k_traj_magic);
    write_pod(file, k_traj_version);
    write_pod(file, static_cast<std::uint64_t>(traj.grid_points));
    write_pod(file, static_cast<std::uint64_t>(traj.mode_count));
    write_pod(file, traj.circumference);
    write_pod(file, static_cast<std::uint64_t>(traj.snapshots.size()));
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        write_pod(file, traj.times[s]);
        for (const auto& v : traj.snapshots[s]) {
            write_pod(file, v.real());
            write_pod(file, v.imag());
        }
    }
}

Trajectory read_trajectory_bin(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot open " + path);
    char magic[8];
    if (!file.read(magic, sizeof magic) ||
        std::memcmp(magic, k_traj_magic, sizeof magic) != 0)
        throw ConfigError(path + ": not a trajectory file");
    const auto version = read_pod<std::uint32_t>(file, path);
    if (version != k_traj_version)
        throw ConfigError(path + ": unsupported trajectory version " +
                          std::to_string(version));
    Trajectory traj;
    traj.grid_points = read_pod<std::uint64_t>(file, path);
    traj.mode_count = read_pod<std::uint64_t>(file, path);
    traj.circumference = read_pod<double>(file, path);
    const auto count = read_pod<std::uint64_t>(file, path);
    const std::size_t values = traj.grid_points * traj.mode_count;
    for (std::uint64_t s = 0; s < count; ++s) {
        traj.times.push_back(read_pod<double>(file, path));
        std::vector<std::complex<double>> snap;
        snap.reserve(values);
        for (std::size_t i = 0; i < values; ++i) {
            const double re = read_pod<double>(file, path);
            const double im = read_pod<double>(file, path);
            snap.emplace_back(re, im);
        }
        traj.snapshots.push_back(std::move(snap));
    }
    return traj;
}

json provenance(const json& config, std::uint64_t seed) {
    return json{{"version", k_version},
                {"config_hash", hash_hex(fnv1a64(canonical_dump(config)))},
                {"seed", seed}};
}

bool check_provenance(const json& config, const json& prov) {
    if (!prov.is_object() || !prov.contains("config_hash") ||
        !prov.at("config_hash").is_string())
        return false;
    return prov.at("config_hash").get<std::string>() ==
           hash_hex(fnv1a64(canonical_dump(config)));
}

}  // namespace maser::io
