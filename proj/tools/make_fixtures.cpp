// Regenerates the shipped noiseless sech fixture (CSV + metadata JSON).
// Run from the repository root: build/make_fixtures [out_dir=configs]
#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "maser/io.hpp"
#include "maser/timeseries.hpp"

int main(int argc, char** argv) {
    const std::string out = argc > 1 ? argv[1] : "configs";

    // One clean sech pulse riding a complex carrier, the shape a field
    // record comes out of the solvers in. The carrier keeps the series
    // complex-valued so the pulse envelope is the plain magnitude (a real
    // baseband record would go through the analytic-signal path, which
    // broadens an isolated sech). The analyze subcommand must recover the
    // width to 1e-8 of the metadata below, so the profile is written
    // noiseless at full double precision.
    const double amplitude = 0.8, center = 1.0, tau = 0.05, offset = 0.0;
    const double carrier_hz = 3.0;
    const double dt = 0.002;
    const std::size_t n = 1000;

    maser::TimeSeries ts;
    ts.dt = dt;
    ts.label = "sech_fixture";
    ts.real_valued = false;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) * dt;
        const double mag = offset + amplitude / std::cosh((t - center) / tau);
        const double phase = 2.0 * std::acos(-1.0) * carrier_hz * t;
        ts.samples.emplace_back(mag * std::cos(phase), mag * std::sin(phase));
    }
    maser::io::write_timeseries_csv(ts, out + "/sech_fixture.csv");

    const nlohmann::json meta{{"amplitude", amplitude},
                              {"center", center},
                              {"tau", tau},
                              {"offset", offset},
                              {"carrier_hz", carrier_hz},
                              {"dt", dt},
                              {"samples", n}};
    maser::io::save_json(meta, out + "/sech_fixture.json");
    std::printf("wrote %s/sech_fixture.csv and %s/sech_fixture.json\n",
                out.c_str(), out.c_str());
    return 0;
}
