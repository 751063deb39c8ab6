#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "maser/analysis.hpp"
#include "maser/errors.hpp"
#include "maser/io.hpp"
#include "maser/lle.hpp"
#include "maser/mbe.hpp"
#include "maser/params.hpp"
#include "maser/presets.hpp"
#include "maser/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using namespace maser;

void print_json(const json& j) { std::fputs(io::canonical_dump(j).c_str(), stdout); }

void write_run_dir(const std::string& out, const json& config,
                   std::uint64_t seed) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec && !fs::is_directory(out))
        throw ConfigError("cannot create output directory " + out + ": " +
                          ec.message());
    io::save_json(config, out + "/config.json");
    io::save_json(io::provenance(config, seed), out + "/provenance.json");
}

int run_check(const std::string& out) {
    if (out.empty())
        throw ConfigError("--check needs --out pointing at a run directory");
    const json config = io::load_json(out + "/config.json");
    const json prov = io::load_json(out + "/provenance.json");
    if (!io::check_provenance(config, prov)) {
        std::fprintf(stderr,
                     "integrity check failed: %s/config.json does not match "
                     "the provenance hash\n",
                     out.c_str());
        return 2;
    }
    std::printf("integrity ok: %s\n", out.c_str());
    return 0;
}

double json_number(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw ConfigError(std::string("init.") + key + ": expected a number");
    return j.at(key).get<double>();
}

std::string json_text(const json& j, const char* key,
                      const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_string())
        throw ConfigError(std::string("init.") + key + ": expected a string");
    return j.at(key).get<std::string>();
}

RingField make_lle_init(const LleConfig& cfg, const json& init) {
    if (!init.is_object()) throw ConfigError("init: expected a JSON object");
    const std::string kind = json_text(init, "kind", "noise");
    const double amplitude = json_number(init, "amplitude", 1e-3);
    if (kind == "zero") return lle_init_zero(cfg);
    if (kind == "sech")
        return lle_init_sech(cfg, amplitude,
                             json_number(init, "center", 0.0));
    if (kind == "noise") {
        std::complex<double> cw{0.0, 0.0};
        if (init.contains("cw_level")) {
            const json& lvl = init.at("cw_level");
            if (!lvl.is_array() || lvl.size() != 2 || !lvl[0].is_number() ||
                !lvl[1].is_number())
                throw ConfigError("init.cw_level: expected [re, im]");
            cw = {lvl[0].get<double>(), lvl[1].get<double>()};
        }
        return lle_init_cw_noise(cfg, cw, amplitude);
    }
    throw ConfigError("init.kind: expected zero, noise or sech, got \"" +
                      kind + "\"");
}

MbeState make_mbe_init(const MbeConfig& cfg, const json& init) {
    if (!init.is_object()) throw ConfigError("init: expected a JSON object");
    const std::string kind = json_text(init, "kind", "noise");
    const double amplitude = json_number(init, "amplitude", 1e-3);
    if (kind == "zero") return mbe_init_zero(cfg);
    if (kind == "noise") return mbe_init_noise(cfg, amplitude);
    if (kind == "fixed_point") return mbe_init_fixed_point(cfg, amplitude);
    throw ConfigError(
        "init.kind: expected zero, noise or fixed_point, got \"" + kind +
        "\"");
}

double snapshot_mean_power(const Trajectory& traj, std::size_t snapshot) {
    double power = 0.0;
    for (const auto& v : traj.snapshots[snapshot]) power += std::norm(v);
    return power / static_cast<double>(traj.snapshots[snapshot].size());
}

/// Loads --config / --preset (exactly one) and splits off the "init" block.
struct SimulateInput {
    json config;  // solver config document (init removed)
    json init;
    json full;  // what goes into config.json
};

SimulateInput load_simulate_input(const std::string& config_path,
                                  const std::string& preset_name,
                                  SolverKind expected) {
    SimulateInput in;
    if (!config_path.empty() && !preset_name.empty())
        throw ConfigError("give either --config or --preset, not both");
    if (!config_path.empty()) {
        in.config = io::load_json(config_path);
        if (!in.config.is_object())
            throw ConfigError(config_path + ": expected a JSON object");
        in.init = in.config.value("init", json::object());
        in.config.erase("init");
    } else if (!preset_name.empty()) {
        const Preset* preset = find_preset(preset_name);
        if (preset == nullptr)
            throw ConfigError("unknown preset \"" + preset_name + "\"");
        if (preset->solver != expected)
            throw ConfigError("preset \"" + preset_name +
                              "\" belongs to the other solver subcommand");
        in.config = preset->config;
        in.init = json{{"kind", preset->init.kind},
                       {"amplitude", preset->init.amplitude}};
    } else {
        throw ConfigError("need --config or --preset");
    }
    return in;
}

int cmd_normalize(const json& doc, const std::string& out) {
    if (!doc.is_object())
        throw ConfigError("normalize config: expected a JSON object");
    if (!doc.contains("params"))
        throw ConfigError("normalize config: missing required key \"params\"");
    const PhysicalParams params =
        io::physical_params_from_json(doc.at("params"));
    if (!doc.contains("cooperativity") ||
        !doc.at("cooperativity").is_number())
        throw ConfigError(
            "normalize config: missing required key \"cooperativity\"");
    const double coop = doc.at("cooperativity").get<double>();
    int mode_index = 1;
    if (doc.contains("mode_index")) {
        if (!doc.at("mode_index").is_number_integer())
            throw ConfigError("normalize config.mode_index: expected 1 or 2");
        mode_index = doc.at("mode_index").get<int>();
    }
    for (const auto& item : doc.items())
        if (item.key() != "params" && item.key() != "cooperativity" &&
            item.key() != "mode_index")
            throw ConfigError("normalize config: unknown key \"" +
                              item.key() + "\"");
    if (mode_index != 1 && mode_index != 2)
        throw ConfigError("normalize config.mode_index: expected 1 or 2");

    const auto m = static_cast<std::size_t>(mode_index - 1);
    const ScalingConstants scalings = derive_scalings(
        params.g_m[m], params.gamma_m[m], params.gamma_a(), params.gamma_I(),
        coop);
    const NormalizedParams norm = to_normalized(params, mode_index, coop);
    const auto residuals =
        scaling_residuals(scalings, params.g_m[m], params.gamma_m[m],
                          params.gamma_a(), params.gamma_I());
    const json result = io::normalized_to_json(norm, scalings, residuals);
    print_json(result);
    if (!out.empty()) {
        write_run_dir(out, doc, 0);
        io::save_json(result, out + "/normalized.json");
    }
    return 0;
}

int cmd_simulate_lle(const SimulateInput& in, const std::string& out,
                     bool seed_given, std::uint64_t seed,
                     const std::string& format) {
    LleConfig cfg = io::lle_config_from_json(in.config);
    if (seed_given) cfg.noise_seed = seed;
    const LleRunResult run = run_lle(cfg, make_lle_init(cfg, in.init));

    json analysis;
    const auto& traj = run.trajectory;
    if (!traj.snapshots.empty()) {
        const double initial = snapshot_mean_power(traj, 0);
        const double final_p =
            snapshot_mean_power(traj, traj.snapshots.size() - 1);
        analysis["initial_norm"] = initial;
        analysis["final_norm"] = final_p;
        analysis["norm_ratio"] = initial > 0.0 ? final_p / initial : 0.0;
    }
    if (run.output.size() >= 16)
        analysis["report"] =
            io::regime_report_to_json(classify_regime(run.output, {}));
    if (run.error) analysis["error"] = io::run_error_to_json(*run.error);

    json config_doc = io::lle_config_to_json(cfg);
    config_doc["init"] = in.init;
    write_run_dir(out, config_doc, cfg.noise_seed);
    io::write_timeseries_csv(run.output, out + "/output_A.csv");
    io::write_trajectory_bin(traj, out + "/trajectory.bin");
    if (format == "csv") io::write_trajectory_csv(traj, out + "/trajectory.csv");
    io::save_json(analysis, out + "/analysis.json");
    print_json(analysis);
    return run.error ? 4 : 0;
}

int cmd_simulate_mbe(const SimulateInput& in, const std::string& out,
                     bool seed_given, std::uint64_t seed,
                     const std::string& format) {
    MbeConfig cfg = io::mbe_config_from_json(in.config);
    if (seed_given) cfg.noise_seed = seed;
    const MbeRunResult run = run_mbe(cfg, make_mbe_init(cfg, in.init));

    json analysis;
    const auto& traj = run.trajectory;
    if (!traj.snapshots.empty()) {
        const double initial = snapshot_mean_power(traj, 0);
        const double final_p =
            snapshot_mean_power(traj, traj.snapshots.size() - 1);
        analysis["initial_norm"] = initial;
        analysis["final_norm"] = final_p;
        analysis["norm_ratio"] = initial > 0.0 ? final_p / initial : 0.0;
    }
    json reports;
    for (const auto& output : run.outputs)
        if (output.size() >= 16)
            reports[output.label] =
                io::regime_report_to_json(classify_regime(output, {}));
    if (!reports.empty()) analysis["reports"] = reports;
    if (!run.warnings.empty()) analysis["warnings"] = run.warnings;
    if (run.error) analysis["error"] = io::run_error_to_json(*run.error);

    json config_doc = io::mbe_config_to_json(cfg);
    config_doc["init"] = in.init;
    write_run_dir(out, config_doc, cfg.noise_seed);
    for (const auto& output : run.outputs)
        io::write_timeseries_csv(output,
                                 out + "/output_" + output.label + ".csv");
    io::write_trajectory_bin(traj, out + "/trajectory.bin");
    if (format == "csv") io::write_trajectory_csv(traj, out + "/trajectory.csv");
    io::save_json(analysis, out + "/analysis.json");
    print_json(analysis);
    return run.error ? 4 : 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out,
              bool seed_given, std::uint64_t seed, bool threads_given,
              unsigned threads, const std::string& format) {
    SweepPlan plan = io::sweep_plan_from_json(io::load_json(config_path));
    if (seed_given) plan.seed_base = seed;
    if (threads_given) plan.threads = threads;

    // Fail on an unwritable output directory before any compute.
    write_run_dir(out, io::sweep_plan_to_json(plan), plan.seed_base);

    const SweepResult result = run_sweep(plan);
    json summary = io::sweep_result_to_json(result);
    if (result.shape.size() == 1) {
        json transitions = json::array();
        for (const auto& t : boundary_scan(result)) {
            transitions.push_back(
                json{{"position", t.position},
                     {"label_before", to_string(t.label_before)},
                     {"label_after", to_string(t.label_after)},
                     {"pulses_before", t.pulses_before},
                     {"pulses_after", t.pulses_after},
                     {"label_changed", t.label_changed},
                     {"pulse_count_changed", t.pulse_count_changed}});
        }
        summary["transitions"] = transitions;
    }
    io::save_json(summary, out + "/sweep.json");

    if (plan.keep_outputs && format == "csv") {
        std::size_t total_samples = 0;
        for (const auto& p : result.points)
            if (p.output) total_samples += p.output->size();
        if (total_samples > 100'000'000)
            throw ConfigError(
                "per-point CSV dump would exceed the size guard (1e8 "
                "samples); drop keep_outputs or thin the outputs");
        fs::create_directories(out + "/points");
        for (const auto& p : result.points)
            if (p.output)
                io::write_timeseries_csv(
                    *p.output, out + "/points/point_" +
                                   std::to_string(p.index) + ".csv");
    }

    std::size_t failed = 0;
    for (const auto& p : result.points) failed += p.failed ? 1 : 0;
    std::printf("sweep: %zu points, %zu failed, summary in %s/sweep.json\n",
                result.points.size(), failed, out.c_str());
    return 0;  // per-point failures are recorded, not fatal
}

TimeSeries series_from_trajectory(const Trajectory& traj, std::size_t mode) {
    if (mode >= traj.mode_count)
        throw ConfigError("analyze config.mode: trajectory has " +
                          std::to_string(traj.mode_count) + " mode(s)");
    if (traj.snapshots.size() < 2)
        throw ConfigError("trajectory has fewer than 2 snapshots");
    TimeSeries ts;
    ts.label = mode == 0 ? "A" : "B";
    ts.dt = traj.times[1] - traj.times[0];
    if (!(ts.dt > 0.0))
        throw ConfigError("trajectory snapshot times must increase");
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        const double expected =
            traj.times[0] + static_cast<double>(s) * ts.dt;
        if (std::abs(traj.times[s] - expected) >
            1e-9 * std::max(1.0, std::abs(expected)))
            throw ConfigError(
                "trajectory snapshots are not uniformly spaced; rerun with "
                "a fixed snapshot_stride");
        std::complex<double> sum{0.0, 0.0};
        for (std::size_t c = 0; c < traj.grid_points; ++c)
            sum += traj.snapshots[s][mode * traj.grid_points + c];
        ts.samples.push_back(sum / static_cast<double>(traj.grid_points));
    }
    return ts;
}

int cmd_analyze(const json& doc, const std::string& out) {
    if (!doc.is_object())
        throw ConfigError("analyze config: expected a JSON object");
    static const char* known[] = {"input",  "kind",       "mode",
                                  "dt",     "label",      "window",
                                  "thresholds", "fit_pulses", "include_bins"};
    for (const auto& item : doc.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || item.key() == k;
        if (!ok)
            throw ConfigError("analyze config: unknown key \"" + item.key() +
                              "\"");
    }
    if (!doc.contains("input") || !doc.at("input").is_string())
        throw ConfigError("analyze config: missing required key \"input\"");
    const std::string input = doc.at("input").get<std::string>();
    const std::string kind = doc.value("kind", std::string("timeseries"));
    const std::string window_name = doc.value("window", std::string("hann"));
    RegimeThresholds thresholds;
    if (doc.contains("thresholds"))
        thresholds = io::regime_thresholds_from_json(doc.at("thresholds"));

    TimeSeries ts;
    if (kind == "timeseries") {
        ts = io::read_timeseries_csv(input);
    } else if (kind == "trajectory") {
        ts = series_from_trajectory(io::read_trajectory_bin(input),
                                    doc.value("mode", std::size_t{0}));
    } else {
        throw ConfigError(
            "analyze config.kind: expected timeseries or trajectory");
    }
    if (doc.contains("dt")) ts.dt = doc.at("dt").get<double>();
    if (doc.contains("label")) ts.label = doc.at("label").get<std::string>();
    if (!(ts.dt > 0.0))
        throw ConfigError("analyze config.dt: must be positive");
    if (ts.size() < 16)
        throw ConfigError(input + ": series shorter than 16 samples");

    WindowFn window = WindowFn::hann;
    if (window_name == "rectangular")
        window = WindowFn::rectangular;
    else if (window_name != "hann")
        throw ConfigError(
            "analyze config.window: expected hann or rectangular");

    json result;
    result["report"] =
        io::regime_report_to_json(classify_regime(ts, thresholds));
    if (ts.size() >= 64)
        result["spectrum"] = io::comb_spectrum_to_json(
            comb_spectrum(ts, window, thresholds.k_mad),
            doc.value("include_bins", false));
    if (doc.value("fit_pulses", true)) {
        json fits = json::array();
        for (const auto& win :
             detect_pulses(ts, thresholds.pulse_threshold_frac,
                           thresholds.min_gap))
            if (win.end - win.begin + 1 >= 8)
                fits.push_back(io::pulse_fit_to_json(fit_sech(ts, win)));
        result["fits"] = fits;
    }

    print_json(result);
    if (!out.empty()) {
        write_run_dir(out, doc, 0);
        io::save_json(result, out + "/analysis.json");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "maser: millikelvin whispering-gallery maser simulator and analysis "
        "toolkit"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out_dir, format = "json";
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool check = false;

    const auto add_common = [&](CLI::App* sub, const char* default_out,
                                bool with_preset) {
        sub->add_option("--config", config_path, "JSON config file")
            ->envname("MASER_CONFIG");
        if (with_preset)
            sub->add_option("--preset", preset_name,
                            "named preset from the bank");
        sub->add_option("--out", out_dir, "output directory")
            ->envname("MASER_OUT")
            ->default_val(default_out);
        sub->add_option("--seed", seed, "noise seed override")
            ->envname("MASER_SEED");
        sub->add_option("--format", format, "json | csv (extra CSV dumps)")
            ->envname("MASER_FORMAT")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_flag("--check", check,
                      "verify config/provenance integrity of --out and exit");
    };

    CLI::App* normalize = app.add_subcommand(
        "normalize",
        "dimensional parameters -> scaling constants and dimensionless "
        "groups");
    add_common(normalize, "", false);

    CLI::App* sim_lle = app.add_subcommand(
        "simulate-lle", "integrate the ring envelope equation");
    add_common(sim_lle, "maser_lle_run", true);

    CLI::App* sim_mbe = app.add_subcommand(
        "simulate-mbe", "integrate the field/polarization/inversion system");
    add_common(sim_mbe, "maser_mbe_run", true);

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "run a parameter sweep plan");
    add_common(sweep_cmd, "maser_sweep", false);
    sweep_cmd->add_option("--threads", threads, "worker thread count")
        ->envname("MASER_THREADS");

    CLI::App* analyze = app.add_subcommand(
        "analyze", "pulse/comb/regime analysis of a series or trajectory");
    add_common(analyze, "", false);

    CLI::App* occupation = app.add_subcommand(
        "occupation", "thermal occupation of a transition: NU_HZ TEMP_K");
    double nu_hz = 0.0, temp_k = 0.0;
    occupation->add_option("nu_hz", nu_hz, "transition frequency (Hz)")
        ->required();
    occupation->add_option("temp_k", temp_k, "temperature (K)")->required();
    occupation->add_option("--format", format, "json | text")
        ->check(CLI::IsMember({"json", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // malformed invocation is a config error
    }

    try {
        if (app.got_subcommand(occupation)) {
            if (!(nu_hz > 0.0) || !(temp_k > 0.0))
                throw DomainError(
                    "occupation: frequency and temperature must be positive");
            const double n = thermal_occupation(nu_hz, temp_k);
            if (format == "json")
                print_json(json{{"frequency_hz", nu_hz},
                                {"temperature_k", temp_k},
                                {"occupation", n}});
            else
                std::printf("%.17g\n", n);
            return 0;
        }
        if (check) return run_check(out_dir);
        if (app.got_subcommand(normalize)) {
            if (config_path.empty()) throw ConfigError("need --config");
            return cmd_normalize(io::load_json(config_path), out_dir);
        }
        if (app.got_subcommand(sim_lle)) {
            const auto in = load_simulate_input(config_path, preset_name,
                                                SolverKind::lle);
            return cmd_simulate_lle(in, out_dir,
                                    sim_lle->count("--seed") > 0, seed,
                                    format);
        }
        if (app.got_subcommand(sim_mbe)) {
            const auto in = load_simulate_input(config_path, preset_name,
                                                SolverKind::mbe);
            return cmd_simulate_mbe(in, out_dir,
                                    sim_mbe->count("--seed") > 0, seed,
                                    format);
        }
        if (app.got_subcommand(sweep_cmd)) {
            if (config_path.empty()) throw ConfigError("need --config");
            return cmd_sweep(config_path, out_dir,
                             sweep_cmd->count("--seed") > 0, seed,
                             sweep_cmd->count("--threads") > 0, threads,
                             format);
        }
        if (app.got_subcommand(analyze)) {
            if (config_path.empty()) throw ConfigError("need --config");
            return cmd_analyze(io::load_json(config_path), out_dir);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return 3;
    } catch (const BlowupError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
