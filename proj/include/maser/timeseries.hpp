#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace maser {

/// Uniformly sampled output signal. Complex baseband samples by default;
/// real_valued marks series imported from real-valued recordings, whose
/// envelope is then taken from the analytic signal.
struct TimeSeries {
    std::vector<std::complex<double>> samples;
    double dt = 1.0;
    std::string label;
    bool real_valued = false;

    [[nodiscard]] std::size_t size() const { return samples.size(); }
    [[nodiscard]] double duration() const {
        return dt * static_cast<double>(samples.size());
    }
};

/// Field snapshots on the ring grid. Samples are stored per snapshot as
/// mode-major flattened arrays: index = mode * grid_points + cell.
struct Trajectory {
    std::size_t grid_points = 0;
    std::size_t mode_count = 1;
    double circumference = 0.0;  // ring length (2*pi for the angular grid)
    std::vector<double> times;
    std::vector<std::vector<std::complex<double>>> snapshots;
};

/// Integration failure retained alongside the partial results.
struct RunError {
    std::size_t step = 0;
    double max_abs = 0.0;
    std::string message;
};

}  // namespace maser
