#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "maser/errors.hpp"
#include "maser/hash.hpp"
#include "maser/io.hpp"
#include "maser/params.hpp"
#include "maser/sweep.hpp"
#include "maser/timeseries.hpp"

using namespace maser;
using nlohmann::json;

namespace {

// Self-deleting scratch file under the system temp directory.
struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name)
        : path((std::filesystem::temp_directory_path() / ("maser_io_" + name))
                   .string()) {}
    TempFile(const TempFile&) = delete;
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
}

bool throws_mentioning(const std::function<void()>& fn,
                       const std::string& needle) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

json valid_mbe_json() {
    return json{
        {"modes", json::array({json{{"theta", 0.1},
                                    {"gamma", 2.0},
                                    {"coupling_weight", 1.0}}})},
        {"delta", -0.2},
        {"gamma_a", 3.0},
        {"gamma_I", 1.5},
        {"cooperativity", 2.0},
        {"d0_over_chi", -0.9},
        {"grid_points", 8},
        {"c_eff", 1.0},
        {"dt", 0.005},
        {"t_end", 1.0},
    };
}

}  // namespace

TEST_CASE("fnv1a64 matches the published test vectors") {
    CHECK(fnv1a64("") == UINT64_C(0xcbf29ce484222325));
    CHECK(fnv1a64("a") == UINT64_C(0xaf63dc4c8601ec8c));
    CHECK(fnv1a64("foobar") == UINT64_C(0x85944171f73967e8));
}

TEST_CASE("canonical_dump sorts keys and is insertion-order independent") {
    json first;
    first["zeta"] = 1.0;
    first["alpha"] = json{{"b", 2}, {"a", 1}};
    json second;
    second["alpha"] = json::object();
    second["alpha"]["a"] = 1;
    second["alpha"]["b"] = 2;
    second["zeta"] = 1.0;
    CHECK(io::canonical_dump(first) == io::canonical_dump(second));
    CHECK(io::canonical_dump(first).back() == '\n');
}

TEST_CASE("save_json and load_json round-trip a document") {
    TempFile file("roundtrip.json");
    const json doc{{"name", "demo"},
                   {"values", {1.5, -2.0, 3e-9}},
                   {"nested", {{"flag", true}, {"n", nullptr}}}};
    io::save_json(doc, file.path);
    CHECK(io::load_json(file.path) == doc);

    std::ifstream f(file.path);
    std::string contents((std::istreambuf_iterator<char>(f)),
                         std::istreambuf_iterator<char>());
    CHECK(contents == io::canonical_dump(doc));
}

TEST_CASE("load_json reports missing files and parse failures") {
    CHECK(throws_mentioning(
        [] { (void)io::load_json("/nonexistent/nowhere.json"); },
        "cannot open"));
    TempFile file("broken.json");
    write_text(file.path, "{\"a\": 1,,}");
    CHECK(throws_mentioning([&] { (void)io::load_json(file.path); },
                            "parse error"));
}

TEST_CASE("physical params codec round-trips and rejects bad documents") {
    const PhysicalParams p = default_physical_params();
    const json j = io::physical_params_to_json(p);
    const PhysicalParams q = io::physical_params_from_json(j);
    CHECK(q.omega_a == p.omega_a);
    CHECK(q.omega_m == p.omega_m);
    CHECK(q.g_m == p.g_m);
    CHECK(q.gamma_m == p.gamma_m);
    CHECK(q.gamma_E == p.gamma_E);
    CHECK(q.gamma_D == p.gamma_D);
    CHECK(q.gamma_P == p.gamma_P);
    CHECK(q.c_eff == p.c_eff);
    CHECK(q.radius == p.radius);
    CHECK(q.omega_0 == p.omega_0);

    json missing = j;
    missing.erase("gamma_E");
    CHECK(throws_mentioning(
        [&] { (void)io::physical_params_from_json(missing); }, "gamma_E"));

    json unknown = j;
    unknown["gamma_X"] = 1.0;
    CHECK(throws_mentioning(
        [&] { (void)io::physical_params_from_json(unknown); }, "gamma_X"));

    json short_array = j;
    short_array["g_m"] = {1.0};
    CHECK(throws_mentioning(
        [&] { (void)io::physical_params_from_json(short_array); },
        "array of 2"));

    CHECK_THROWS_AS((void)io::physical_params_from_json(json::array()),
                    ConfigError);
}

TEST_CASE("lle config codec round-trips every field") {
    LleConfig cfg;
    cfg.theta0 = 1.25;
    cfg.eta = -1.0;
    cfg.beta = 0.75;
    cfg.grid_points = 64;
    cfg.dt_bar = 2e-4;
    cfg.t_bar_end = 0.5;
    cfg.drive_amplitude = {0.3, -0.1};
    cfg.loss_enabled = false;
    cfg.dealias = false;
    cfg.nonlinearity_enabled = false;
    cfg.noise_seed = 99;
    cfg.snapshot_stride = 7;
    cfg.output_stride = 3;
    cfg.blowup_threshold = 123.0;

    const LleConfig back = io::lle_config_from_json(io::lle_config_to_json(cfg));
    CHECK(back.theta0 == cfg.theta0);
    CHECK(back.eta == cfg.eta);
    CHECK(back.beta == cfg.beta);
    CHECK(back.grid_points == cfg.grid_points);
    CHECK(back.dt_bar == cfg.dt_bar);
    CHECK(back.t_bar_end == cfg.t_bar_end);
    CHECK(back.drive_amplitude == cfg.drive_amplitude);
    CHECK(back.loss_enabled == cfg.loss_enabled);
    CHECK(back.dealias == cfg.dealias);
    CHECK(back.nonlinearity_enabled == cfg.nonlinearity_enabled);
    CHECK(back.noise_seed == cfg.noise_seed);
    CHECK(back.snapshot_stride == cfg.snapshot_stride);
    CHECK(back.output_stride == cfg.output_stride);
    CHECK(back.blowup_threshold == cfg.blowup_threshold);
}

TEST_CASE("lle config codec applies defaults and flags bad keys") {
    const LleConfig defaults = io::lle_config_from_json(json::object());
    const LleConfig reference;
    CHECK(defaults.theta0 == reference.theta0);
    CHECK(defaults.grid_points == reference.grid_points);
    CHECK(defaults.drive_amplitude == reference.drive_amplitude);

    // Signed-typed positive integers are fine; negatives are not.
    json signed_ok = json::object();
    signed_ok["grid_points"] = json(static_cast<std::int64_t>(32));
    CHECK(io::lle_config_from_json(signed_ok).grid_points == 32);
    json negative = json::object();
    negative["grid_points"] = -32;
    CHECK(throws_mentioning([&] { (void)io::lle_config_from_json(negative); },
                            "non-negative"));

    CHECK(throws_mentioning(
        [] {
            (void)io::lle_config_from_json(json{{"thata0", 1.0}});
        },
        "unknown key \"thata0\""));
    CHECK(throws_mentioning(
        [] {
            (void)io::lle_config_from_json(
                json{{"drive_amplitude", {0.1}}});
        },
        "array of 2"));
}

TEST_CASE("mbe config codec round-trips, including modes and spin blocks") {
    MbeConfig cfg;
    cfg.modes = {{0.1, 2.0, 1.0}, {-0.3, 1.5, 0.5}};
    cfg.delta = 0.2;
    cfg.gamma_a = 2.5;
    cfg.gamma_I = 1.25;
    cfg.cooperativity = 3.0;
    cfg.d0_over_chi = -1.1;
    cfg.grid_points = 16;
    cfg.c_eff = 0.5;
    cfg.radius = 2.0;
    cfg.dt = 0.002;
    cfg.t_end = 4.0;
    cfg.spin.count = 5;
    cfg.spin.spread = 0.7;
    cfg.spin.per_mode_packets = true;
    cfg.noise_seed = 31;
    cfg.snapshot_stride = 11;
    cfg.output_stride = 2;
    cfg.blowup_threshold = 77.0;

    const MbeConfig back = io::mbe_config_from_json(io::mbe_config_to_json(cfg));
    REQUIRE(back.modes.size() == 2);
    for (std::size_t m = 0; m < 2; ++m) {
        CHECK(back.modes[m].theta == cfg.modes[m].theta);
        CHECK(back.modes[m].gamma == cfg.modes[m].gamma);
        CHECK(back.modes[m].coupling_weight == cfg.modes[m].coupling_weight);
    }
    CHECK(back.delta == cfg.delta);
    CHECK(back.gamma_a == cfg.gamma_a);
    CHECK(back.gamma_I == cfg.gamma_I);
    CHECK(back.cooperativity == cfg.cooperativity);
    CHECK(back.d0_over_chi == cfg.d0_over_chi);
    CHECK(back.grid_points == cfg.grid_points);
    CHECK(back.c_eff == cfg.c_eff);
    CHECK(back.radius == cfg.radius);
    CHECK(back.dt == cfg.dt);
    CHECK(back.t_end == cfg.t_end);
    CHECK(back.spin.count == cfg.spin.count);
    CHECK(back.spin.spread == cfg.spin.spread);
    CHECK(back.spin.per_mode_packets == cfg.spin.per_mode_packets);
    CHECK(back.noise_seed == cfg.noise_seed);
    CHECK(back.snapshot_stride == cfg.snapshot_stride);
    CHECK(back.output_stride == cfg.output_stride);
    CHECK(back.blowup_threshold == cfg.blowup_threshold);
}

TEST_CASE("mbe config codec folds a pump block and guards the dt default") {
    json with_pump = valid_mbe_json();
    with_pump.erase("d0_over_chi");
    with_pump["pump"] = json{{"power_w", 3.0},
                             {"detuning_hz", 0.0},
                             {"linewidth_hz", 1e6},
                             {"saturation_power_w", 1.0},
                             {"d0_max", 0.5},
                             {"chi", -2.0}};
    const MbeConfig folded = io::mbe_config_from_json(with_pump);
    CHECK(folded.d0_over_chi ==
          doctest::Approx(io::pump_block_to_d0_over_chi(with_pump["pump"]))
              .epsilon(1e-15));

    json both = with_pump;
    both["d0_over_chi"] = -0.9;
    CHECK(throws_mentioning([&] { (void)io::mbe_config_from_json(both); },
                            "either d0_over_chi or a pump block"));

    json no_dt = valid_mbe_json();
    no_dt.erase("dt");
    const MbeConfig suggested = io::mbe_config_from_json(no_dt);
    CHECK(suggested.dt == suggested.suggested_dt());

    json bad_mode = valid_mbe_json();
    bad_mode["modes"][0]["gama"] = 1.0;
    CHECK(throws_mentioning([&] { (void)io::mbe_config_from_json(bad_mode); },
                            "modes[0]"));

    json bad_spin = valid_mbe_json();
    bad_spin["spin"] = json{{"count", 3}, {"spreed", 0.1}};
    CHECK(throws_mentioning([&] { (void)io::mbe_config_from_json(bad_spin); },
                            "spin"));
}

TEST_CASE("pump block folding is even in detuning and guards its domain") {
    json pump{{"power_w", 3.0},          {"detuning_hz", 0.0},
              {"linewidth_hz", 1e6},     {"saturation_power_w", 1.0},
              {"d0_max", 0.5},           {"chi", -2.0}};
    // On resonance: delivered 3 W, saturated inversion 0.5 * 3/4.
    CHECK(io::pump_block_to_d0_over_chi(pump) ==
          doctest::Approx(0.5 * 0.75 / -2.0).epsilon(1e-15));

    json plus = pump, minus = pump;
    plus["detuning_hz"] = 4e5;
    minus["detuning_hz"] = -4e5;
    CHECK(io::pump_block_to_d0_over_chi(plus) ==
          io::pump_block_to_d0_over_chi(minus));

    json zero_chi = pump;
    zero_chi["chi"] = 0.0;
    CHECK(throws_mentioning(
        [&] { (void)io::pump_block_to_d0_over_chi(zero_chi); }, "chi"));
    json big_d0 = pump;
    big_d0["d0_max"] = 1.0;
    CHECK_THROWS_AS((void)io::pump_block_to_d0_over_chi(big_d0), DomainError);
}

TEST_CASE("regime thresholds codec round-trips") {
    RegimeThresholds t;
    t.power_floor = 1e-5;
    t.full_scale = 2.0;
    t.cw_ratio = 0.03;
    t.duty_split = 0.25;
    t.dense_count = 12;
    t.pulse_threshold_frac = 0.4;
    t.min_gap = 5;
    t.k_mad = 7.5;
    const RegimeThresholds back =
        io::regime_thresholds_from_json(io::regime_thresholds_to_json(t));
    CHECK(back.power_floor == t.power_floor);
    CHECK(back.full_scale == t.full_scale);
    CHECK(back.cw_ratio == t.cw_ratio);
    CHECK(back.duty_split == t.duty_split);
    CHECK(back.dense_count == t.dense_count);
    CHECK(back.pulse_threshold_frac == t.pulse_threshold_frac);
    CHECK(back.min_gap == t.min_gap);
    CHECK(back.k_mad == t.k_mad);

    CHECK(throws_mentioning(
        [] {
            (void)io::regime_thresholds_from_json(json{{"cw_ration", 0.1}});
        },
        "cw_ration"));
}

TEST_CASE("sweep plan codec round-trips and validates") {
    SweepPlan plan;
    plan.solver = SolverKind::mbe;
    plan.base_config = valid_mbe_json();
    plan.axes = {{"/d0_over_chi", {-0.3, -0.6, -0.9}},
                 {"/gamma_a", {1.0, 2.0}}};
    plan.seed_mode = SeedMode::fixed;
    plan.seed_base = 77;
    plan.init = {"fixed_point", 0.02};
    plan.discard_fraction = 0.25;
    plan.thresholds.cw_ratio = 0.04;
    plan.keep_outputs = true;
    plan.threads = 3;

    const json j = io::sweep_plan_to_json(plan);
    const SweepPlan back = io::sweep_plan_from_json(j);
    CHECK(io::canonical_dump(io::sweep_plan_to_json(back)) ==
          io::canonical_dump(j));
    CHECK(back.hash() == plan.hash());

    json no_config = j;
    no_config.erase("config");
    CHECK(throws_mentioning([&] { (void)io::sweep_plan_from_json(no_config); },
                            "config"));
    json no_axes = j;
    no_axes.erase("axes");
    CHECK(throws_mentioning([&] { (void)io::sweep_plan_from_json(no_axes); },
                            "axes"));
    json bad_solver = j;
    bad_solver["solver"] = "fdtd";
    CHECK(throws_mentioning(
        [&] { (void)io::sweep_plan_from_json(bad_solver); }, "solver"));
    json bad_mode = j;
    bad_mode["seed_mode"] = "sometimes";
    CHECK(throws_mentioning([&] { (void)io::sweep_plan_from_json(bad_mode); },
                            "seed_mode"));
    json bad_values = j;
    bad_values["axes"][0]["values"] = {"high", "low"};
    CHECK(throws_mentioning(
        [&] { (void)io::sweep_plan_from_json(bad_values); }, "values"));
}

TEST_CASE("sweep result JSON marks failures and keeps report fields") {
    SweepPlan plan;
    plan.solver = SolverKind::lle;
    plan.base_config = json{{"theta0", 0.5},
                            {"beta", 1.0},
                            {"eta", 1.0},
                            {"drive_amplitude", json::array({0.3, 0.0})},
                            {"grid_points", 16},
                            {"dt_bar", 1e-3},
                            {"t_bar_end", 2.0},
                            {"output_stride", 10},
                            {"blowup_threshold", 100.0}};
    plan.axes = {{"/drive_amplitude/0", {0.3, 1e8}}};
    plan.init = {"zero", 0.0};
    plan.keep_outputs = true;

    const SweepResult result = run_sweep(plan);
    REQUIRE(result.points.size() == 2);
    REQUIRE(!result.points[0].failed);
    REQUIRE(result.points[1].failed);

    const json j = io::sweep_result_to_json(result);
    CHECK(j.at("version") == io::k_version);
    CHECK(j.at("config_hash").get<std::string>().size() == 16);
    CHECK(j.at("shape") == json::array({2}));
    CHECK(j.at("axes").size() == 1);
    REQUIRE(j.at("points").size() == 2);

    const json& ok = j.at("points")[0];
    CHECK(ok.at("failed") == false);
    CHECK(ok.at("report").contains("label"));
    CHECK(ok.at("report").contains("p_peak_db"));
    CHECK(!ok.contains("error"));
    CHECK(ok.at("output").at("samples").get<std::size_t>() ==
          result.points[0].output->samples.size());

    const json& bad = j.at("points")[1];
    CHECK(bad.at("failed") == true);
    CHECK(bad.contains("error"));
    CHECK(!bad.contains("report"));
}

TEST_CASE("time series CSV round-trips bit-exactly") {
    TimeSeries ts;
    ts.dt = 0.0125;
    ts.samples = {{1.0, -2.0},
                  {0.1234567890123456789, 3e-300},
                  {-7.25, 0.3333333333333333},
                  {9.874e17, -1.0 / 3.0}};
    TempFile file("series.csv");
    io::write_timeseries_csv(ts, file.path);
    const TimeSeries back = io::read_timeseries_csv(file.path);
    REQUIRE(back.samples.size() == ts.samples.size());
    for (std::size_t i = 0; i < ts.samples.size(); ++i)
        CHECK(back.samples[i] == ts.samples[i]);  // %.17g is lossless
    CHECK(back.dt == ts.dt);
    CHECK(!back.real_valued);
}

TEST_CASE("time series CSV marks all-real recordings") {
    TimeSeries ts;
    ts.dt = 0.5;
    ts.samples = {{0.3, 0.0}, {-1.5, 0.0}, {2.25, 0.0}};
    TempFile file("real.csv");
    io::write_timeseries_csv(ts, file.path);
    CHECK(io::read_timeseries_csv(file.path).real_valued);
}

TEST_CASE("time series CSV reader rejects malformed files") {
    TempFile file("bad.csv");

    write_text(file.path, "time,real,imag\n0,1,0\n");
    CHECK(throws_mentioning([&] { (void)io::read_timeseries_csv(file.path); },
                            "header"));

    write_text(file.path, "t,re,im\n0,1\n");
    CHECK(throws_mentioning([&] { (void)io::read_timeseries_csv(file.path); },
                            "malformed row 2"));

    write_text(file.path, "t,re,im\n0,1,0,9\n");
    CHECK(throws_mentioning([&] { (void)io::read_timeseries_csv(file.path); },
                            "malformed row 2"));

    write_text(file.path, "t,re,im\n");
    CHECK(throws_mentioning([&] { (void)io::read_timeseries_csv(file.path); },
                            "no samples"));

    write_text(file.path, "t,re,im\n0,1,0\n1,1,0\n2.5,1,0\n");
    CHECK(throws_mentioning([&] { (void)io::read_timeseries_csv(file.path); },
                            "non-uniform"));

    write_text(file.path, "t,re,im\n1,1,0\n0,1,0\n");
    CHECK(throws_mentioning([&] { (void)io::read_timeseries_csv(file.path); },
                            "increase"));
}

TEST_CASE("time series CSV tolerates CRLF and defaults dt for one row") {
    TempFile file("crlf.csv");
    write_text(file.path, "t,re,im\r\n0,2.5,0\r\n");
    const TimeSeries ts = io::read_timeseries_csv(file.path);
    REQUIRE(ts.samples.size() == 1);
    CHECK(ts.samples[0].real() == 2.5);
    CHECK(ts.dt == 1.0);
    CHECK(ts.real_valued);
}

TEST_CASE("trajectory CSV is long-format with one row per cell") {
    Trajectory traj;
    traj.grid_points = 3;
    traj.mode_count = 2;
    traj.circumference = 6.0;
    traj.times = {0.0, 0.5};
    traj.snapshots = {
        {{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}, {6, 0}},
        {{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}},
    };
    TempFile file("traj.csv");
    io::write_trajectory_csv(traj, file.path);

    std::ifstream f(file.path);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(f, line)) lines.push_back(line);
    REQUIRE(lines.size() == 1 + 2 * 2 * 3);
    CHECK(lines[0] == "t,mode,cell,re,im");
    CHECK(lines[1] == "0,0,0,1,0");
    CHECK(lines[4] == "0,1,0,4,0");  // second mode starts after 3 cells
    CHECK(lines[7] == "0.5,0,0,1,1");
}

TEST_CASE("binary trajectory round-trips bit-exactly") {
    Trajectory traj;
    traj.grid_points = 4;
    traj.mode_count = 2;
    traj.circumference = 6.2831853071795864769;
    traj.times = {0.0, 0.25, 0.5};
    for (int s = 0; s < 3; ++s) {
        std::vector<std::complex<double>> snap;
        for (int i = 0; i < 8; ++i)
            snap.emplace_back(s * 10.0 + i + 0.125, -i * 3e-13);
        traj.snapshots.push_back(std::move(snap));
    }

    TempFile file("traj.bin");
    io::write_trajectory_bin(traj, file.path);
    const Trajectory back = io::read_trajectory_bin(file.path);
    CHECK(back.grid_points == traj.grid_points);
    CHECK(back.mode_count == traj.mode_count);
    CHECK(back.circumference == traj.circumference);
    REQUIRE(back.times.size() == 3);
    REQUIRE(back.snapshots.size() == 3);
    for (std::size_t s = 0; s < 3; ++s) {
        CHECK(back.times[s] == traj.times[s]);
        REQUIRE(back.snapshots[s].size() == traj.snapshots[s].size());
        for (std::size_t i = 0; i < traj.snapshots[s].size(); ++i)
            CHECK(back.snapshots[s][i] == traj.snapshots[s][i]);
    }
}

TEST_CASE("binary trajectory reader rejects foreign or damaged files") {
    TempFile file("damaged.bin");

    write_text(file.path, "NOTATRAJ????????");
    CHECK(throws_mentioning([&] { (void)io::read_trajectory_bin(file.path); },
                            "not a trajectory file"));

    Trajectory traj;
    traj.grid_points = 2;
    traj.mode_count = 1;
    traj.circumference = 1.0;
    traj.times = {0.0};
    traj.snapshots = {{{1, 2}, {3, 4}}};
    io::write_trajectory_bin(traj, file.path);

    // Flip the version field (bytes 8..11).
    {
        std::fstream f(file.path,
                       std::ios::binary | std::ios::in | std::ios::out);
        f.seekp(8);
        const std::uint32_t wrong = 999;
        f.write(reinterpret_cast<const char*>(&wrong), sizeof wrong);
    }
    CHECK(throws_mentioning([&] { (void)io::read_trajectory_bin(file.path); },
                            "unsupported trajectory version"));

    io::write_trajectory_bin(traj, file.path);
    std::filesystem::resize_file(
        file.path, std::filesystem::file_size(file.path) - 9);
    CHECK(throws_mentioning([&] { (void)io::read_trajectory_bin(file.path); },
                            "truncated"));
}

TEST_CASE("provenance blocks verify the config they were made from") {
    const json config{{"gamma", 2.0}, {"seed", 4}};
    const json prov = io::provenance(config, 42);
    CHECK(prov.at("version") == io::k_version);
    CHECK(prov.at("seed") == 42);
    CHECK(prov.at("config_hash").get<std::string>().size() == 16);
    CHECK(io::check_provenance(config, prov));

    json edited = config;
    edited["gamma"] = 2.0000001;
    CHECK(!io::check_provenance(edited, prov));

    json stripped = prov;
    stripped.erase("config_hash");
    CHECK(!io::check_provenance(config, stripped));
    json wrong_type = prov;
    wrong_type["config_hash"] = 12;
    CHECK(!io::check_provenance(config, wrong_type));
    CHECK(!io::check_provenance(config, json::array()));
}

TEST_CASE("report serializers carry the analysis fields") {
    RegimeReport report;
    report.label = RegimeLabel::dense_ii;
    report.mean_output = 0.5;
    report.std_output = 0.25;
    report.pulse_count = 9;
    report.duty_cycle = 0.3;
    report.periods = {8, 1.5, 0.1};
    report.p_peak = 2.0;
    report.p_peak_db = 10.0 * std::log10(2.0);
    report.comb_spacing = 0.75;
    const json j = io::regime_report_to_json(report);
    CHECK(j.at("label") == "II");
    CHECK(j.at("pulse_count") == 9);
    CHECK(j.at("periods").at("count") == 8);
    CHECK(j.at("periods").at("mean") == 1.5);
    CHECK(j.at("p_peak_db") == doctest::Approx(3.0103).epsilon(1e-4));

    CombSpectrum spectrum;
    spectrum.frequency = {-1.0, 0.0, 1.0};
    spectrum.power = {0.1, 5.0, 0.2};
    spectrum.lines = {{0.0, 5.0}};
    spectrum.line_spacing = 0.0;
    spectrum.noise_floor = 0.4;
    const json lean = io::comb_spectrum_to_json(spectrum, false);
    CHECK(lean.at("lines").size() == 1);
    CHECK(lean.at("lines")[0].at("power_db") ==
          doctest::Approx(10.0 * std::log10(5.0)).epsilon(1e-12));
    CHECK(!lean.contains("frequency"));
    const json full = io::comb_spectrum_to_json(spectrum, true);
    CHECK(full.at("frequency") == json(spectrum.frequency));
    CHECK(full.at("power") == json(spectrum.power));

    PulseFit fit;
    fit.amplitude = 2.0;
    fit.center = 1.0;
    fit.width = 0.05;
    fit.offset = 0.1;
    fit.rms_residual = 1e-9;
    fit.converged = true;
    const json fj = io::pulse_fit_to_json(fit);
    CHECK(fj.at("width") == 0.05);
    CHECK(fj.at("converged") == true);

    RunError err{12, 345.0, "field blow-up"};
    const json ej = io::run_error_to_json(err);
    CHECK(ej.at("step") == 12);
    CHECK(ej.at("max_abs") == 345.0);
    CHECK(ej.at("message") == "field blow-up");
}
