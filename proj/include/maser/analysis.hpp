#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "maser/timeseries.hpp"

namespace maser {

/// Envelope of a series: |samples| for complex baseband data, magnitude of
/// the analytic signal (one-sided spectrum) for real-valued recordings.
[[nodiscard]] std::vector<double> envelope(const TimeSeries& ts);

/// Contiguous super-threshold run, widened to the neighboring local minima.
struct PulseWindow {
    std::size_t begin = 0;  // inclusive sample index
    std::size_t end = 0;    // inclusive sample index
    std::size_t peak_index = 0;
    double center_time = 0.0;  // peak_index * dt
    double peak_value = 0.0;   // envelope at the peak
};

/// Threshold detector on the envelope: runs above threshold_frac * max,
/// merged when separated by at most min_gap sub-threshold samples, each
/// widened downhill to the local minima, stopping once the envelope falls
/// below half the detection threshold (hysteresis) so windows hug the
/// pulses instead of tracking tails across the record. Flat series yield
/// no pulses. Invariant under positive rescaling of the input.
[[nodiscard]] std::vector<PulseWindow> detect_pulses(const TimeSeries& ts,
                                                     double threshold_frac,
                                                     std::size_t min_gap = 8);

/// Least-squares fit of A * sech((t - t0) / tau) + c to one pulse window.
struct PulseFit {
    double amplitude = 0.0;
    double center = 0.0;
    double width = 0.0;  // tau
    double offset = 0.0;
    double rms_residual = 0.0;
    bool converged = false;
    /// RMS residual after each accepted Levenberg-Marquardt step,
    /// starting with the initial guess. Non-increasing by construction.
    std::vector<double> residual_history;
};

/// Levenberg-Marquardt with the analytic Jacobian. Window width is set
/// from the half-max half-width (sech reaches half maximum at
/// u = arccosh 2 = 1.3170). On damping escalation past the limit the fit
/// is reported failed and carries the initial guess.
[[nodiscard]] PulseFit fit_sech(const TimeSeries& ts,
                                const PulseWindow& window);

enum class WindowFn { rectangular, hann };

struct CombLine {
    double frequency = 0.0;
    double power = 0.0;  // linear
};

/// Two-sided power spectrum (power_k = |X_k|^2 / N, so the bins sum to the
/// windowed-signal energy) with lines picked above a median + k*MAD floor.
struct CombSpectrum {
    std::vector<double> frequency;  // uniform, ascending, centered on 0
    std::vector<double> power;      // linear
    std::vector<CombLine> lines;    // sorted by frequency
    double line_spacing = 0.0;  // median adjacent-line gap; 0 below 2 lines
    double noise_floor = 0.0;
};

[[nodiscard]] CombSpectrum comb_spectrum(const TimeSeries& ts,
                                         WindowFn window_fn,
                                         double k_mad = 6.0);

/// Consecutive pulse-center differences.
struct PeriodStats {
    std::size_t count = 0;  // pulse count - 1 (0 below 2 pulses)
    double mean = 0.0;
    double cv = 0.0;  // population std / mean
};

[[nodiscard]] PeriodStats intersoliton_periods(
    const std::vector<PulseWindow>& windows);

enum class RegimeLabel { sub_threshold, sparse_i, dense_ii, cw_iii };

[[nodiscard]] std::string to_string(RegimeLabel label);

/// Classification rule knobs. The boundaries are an operationalization
/// chosen here, not values taken from a measurement; they are exposed so
/// surveys can pin them explicitly.
struct RegimeThresholds {
    double power_floor = 1e-6;  // of full_scale^2; below -> sub-threshold
    double full_scale = 1.0;
    double cw_ratio = 0.05;     // std/mean below this -> CW
    double duty_split = 0.2;    // duty cycle above this -> dense
    std::size_t dense_count = 8;
    double pulse_threshold_frac = 0.3;
    std::size_t min_gap = 8;
    double k_mad = 6.0;
};

struct RegimeReport {
    RegimeLabel label = RegimeLabel::sub_threshold;
    double mean_output = 0.0;    // mean envelope
    double std_output = 0.0;     // envelope standard deviation
    std::size_t pulse_count = 0;
    double duty_cycle = 0.0;
    PeriodStats periods;
    double p_peak = 0.0;     // dominant spectral line, linear power
    double p_peak_db = 0.0;  // same line in dB (10 log10)
    double comb_spacing = 0.0;
};

/// sub-threshold if mean envelope power < power_floor * full_scale^2;
/// CW (III) if std/mean < cw_ratio; dense (II) if duty cycle > duty_split
/// or pulse count > dense_count; sparse (I) otherwise.
[[nodiscard]] RegimeReport classify_regime(const TimeSeries& ts,
                                           const RegimeThresholds& thresholds);

}  // namespace maser
