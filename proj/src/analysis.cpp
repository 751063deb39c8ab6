#include "maser/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "maser/errors.hpp"
#include "maser/fft.hpp"

namespace maser {

namespace {

using cplx = std::complex<double>;

constexpr double k_sech_half_max = 1.3169578969248166;  // arccosh 2

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid),
                     v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        std::nth_element(v.begin(),
                         v.begin() + static_cast<std::ptrdiff_t>(mid) - 1,
                         v.begin() + static_cast<std::ptrdiff_t>(mid));
        m = 0.5 * (m + v[mid - 1]);
    }
    return m;
}

double sech(double u) { return 1.0 / std::cosh(u); }

struct SechParams {
    double a = 0.0, t0 = 0.0, tau = 1.0, c = 0.0;
};

double sum_sq_residual(const SechParams& p, const std::vector<double>& t,
                       const std::vector<double>& y) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = y[i] - (p.a * sech((t[i] - p.t0) / p.tau) + p.c);
        ssr += r * r;
    }
    return ssr;
}

// Solves the 4x4 damped normal equations in place. Returns false when the
// system is singular even after damping.
bool solve4(std::array<std::array<double, 4>, 4> m, std::array<double, 4>& b) {
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        if (std::abs(m[pivot][col]) < 1e-300) return false;
        std::swap(m[col], m[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = col + 1; r < 4; ++r) {
            const double f = m[r][col] / m[col][col];
            for (int cc = col; cc < 4; ++cc) m[r][cc] -= f * m[col][cc];
            b[r] -= f * b[col];
        }
    }
    for (int col = 3; col >= 0; --col) {
        for (int r = 0; r < col; ++r) {
            b[r] -= m[r][col] / m[col][col] * b[col];
            m[r][col] = 0.0;
        }
        b[col] /= m[col][col];
    }
    return true;
}

}  // namespace

std::vector<double> envelope(const TimeSeries& ts) {
    if (ts.samples.empty()) throw DomainError("envelope: empty series");
    std::vector<double> env(ts.samples.size());
    if (!ts.real_valued) {
        for (std::size_t i = 0; i < ts.samples.size(); ++i)
            env[i] = std::abs(ts.samples[i]);
        return env;
    }
    // Analytic signal: zero the negative-frequency half of the spectrum
    // and double the positive half (DC and Nyquist kept as they are).
    std::vector<cplx> spec(ts.samples.begin(), ts.samples.end());
    const std::size_t n = spec.size();
    fft::forward(spec);
    for (std::size_t j = 1; j < n; ++j) {
        if (2 * j < n)
            spec[j] *= 2.0;
        else if (2 * j > n)
            spec[j] = cplx{0.0, 0.0};
    }
    fft::inverse(spec);
    for (std::size_t i = 0; i < n; ++i) env[i] = std::abs(spec[i]);
    return env;
}

std::vector<PulseWindow> detect_pulses(const TimeSeries& ts,
                                       double threshold_frac,
                                       std::size_t min_gap) {
    if (!(threshold_frac > 0.0) || !(threshold_frac <= 1.0))
        throw DomainError("detect_pulses: threshold_frac must be in (0, 1]");
    const std::vector<double> env = envelope(ts);
    const auto [min_it, max_it] = std::minmax_element(env.begin(), env.end());
    // A flat series has no pulses; a relative threshold on it would flag
    // the whole record as one window.
    if (*max_it - *min_it <= 1e-12 * std::max(*max_it, 1.0)) return {};

    const double threshold = threshold_frac * *max_it;
    std::vector<PulseWindow> windows;
    const std::size_t n = env.size();
    std::size_t i = 0;
    while (i < n) {
        if (env[i] < threshold) {
            ++i;
            continue;
        }
        std::size_t begin = i;
        while (i < n && env[i] >= threshold) ++i;
        std::size_t end = i - 1;
        if (!windows.empty() &&
            begin - windows.back().end <= min_gap + 1) {
            windows.back().end = end;
        } else {
            windows.push_back(PulseWindow{begin, end, 0, 0.0, 0.0});
        }
    }

    // Hysteresis bound for the downhill walk: without it the walk follows
    // analytically monotone tails across the whole inter-pulse span (duty
    // cycle ~1) and ends on rounding noise once the slope flattens out,
    // which breaks the rescaling invariance.
    const double keep = 0.5 * threshold;
    for (std::size_t w = 0; w < windows.size(); ++w) {
        auto& win = windows[w];
        // Walk downhill to the flanking local minima, staying clear of the
        // neighboring windows so the results remain disjoint.
        const std::size_t lo = w == 0 ? 0 : windows[w - 1].end + 1;
        const std::size_t hi = w + 1 < windows.size()
                                   ? windows[w + 1].begin - 1
                                   : n - 1;
        while (win.begin > lo && env[win.begin - 1] < env[win.begin] &&
               env[win.begin - 1] >= keep)
            --win.begin;
        while (win.end < hi && env[win.end + 1] < env[win.end] &&
               env[win.end + 1] >= keep)
            ++win.end;

        std::size_t peak = win.begin;
        for (std::size_t j = win.begin + 1; j <= win.end; ++j)
            if (env[j] > env[peak]) peak = j;
        win.peak_index = peak;
        win.center_time = static_cast<double>(peak) * ts.dt;
        win.peak_value = env[peak];
    }
    return windows;
}

PulseFit fit_sech(const TimeSeries& ts, const PulseWindow& window) {
    if (window.end >= ts.samples.size() || window.begin > window.end)
        throw DomainError("fit_sech: window out of range");
    const std::size_t n = window.end - window.begin + 1;
    if (n < 8) throw DomainError("fit_sech: window shorter than 8 samples");

    const std::vector<double> full_env = envelope(ts);
    std::vector<double> t(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = static_cast<double>(window.begin + i) * ts.dt;
        y[i] = full_env[window.begin + i];
    }

    // Initial guess: offset from the window edges, width from the
    // half-maximum crossing.
    const std::size_t edge = std::max<std::size_t>(1, n / 8);
    std::vector<double> edges(y.begin(),
                              y.begin() + static_cast<std::ptrdiff_t>(edge));
    edges.insert(edges.end(), y.end() - static_cast<std::ptrdiff_t>(edge),
                 y.end());
    SechParams p;
    p.c = median_of(edges);
    const std::size_t peak = static_cast<std::size_t>(
        std::max_element(y.begin(), y.end()) - y.begin());
    p.a = y[peak] - p.c;
    p.t0 = t[peak];

    PulseFit fit;
    fit.amplitude = p.a;
    fit.center = p.t0;
    fit.offset = p.c;
    fit.width = ts.dt;

    if (!(p.a > 0.0)) {  // flat or inverted window: nothing to fit
        fit.rms_residual = std::sqrt(sum_sq_residual(p, t, y) /
                                     static_cast<double>(n));
        return fit;
    }

    const double half = p.c + 0.5 * p.a;
    double hwhm = 0.0;
    int sides = 0;
    for (std::size_t j = peak; j < n; ++j)
        if (y[j] < half) {
            hwhm += t[j] - p.t0;
            ++sides;
            break;
        }
    for (std::size_t j = peak; j-- > 0;)
        if (y[j] < half) {
            hwhm += p.t0 - t[j];
            ++sides;
            break;
        }
    p.tau = sides > 0 ? hwhm / static_cast<double>(sides) / k_sech_half_max
                      : (t.back() - t.front()) / 8.0;
    if (!(p.tau > 0.0)) p.tau = ts.dt;
    fit.width = p.tau;

    double ssr = sum_sq_residual(p, t, y);
    const auto rms = [&](double s) {
        return std::sqrt(s / static_cast<double>(n));
    };
    fit.rms_residual = rms(ssr);
    fit.residual_history.push_back(fit.rms_residual);

    const SechParams initial = p;
    double lambda = 1e-3;
    for (int iter = 0; iter < 100; ++iter) {
        std::array<std::array<double, 4>, 4> jtj{};
        std::array<double, 4> jtr{};
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (t[i] - p.t0) / p.tau;
            const double s = sech(u);
            const double st = s * std::tanh(u);
            const std::array<double, 4> jac = {
                s, p.a * st / p.tau, p.a * st * u / p.tau, 1.0};
            const double r = y[i] - (p.a * s + p.c);
            for (int a = 0; a < 4; ++a) {
                jtr[a] += jac[a] * r;
                for (int b = 0; b < 4; ++b) jtj[a][b] += jac[a] * jac[b];
            }
        }

        bool accepted = false;
        while (lambda <= 1e12) {
            auto damped = jtj;
            for (int a = 0; a < 4; ++a)
                damped[a][a] += lambda * (jtj[a][a] > 0.0 ? jtj[a][a] : 1.0);
            std::array<double, 4> delta = jtr;
            if (solve4(damped, delta)) {
                SechParams trial{p.a + delta[0], p.t0 + delta[1],
                                 p.tau + delta[2], p.c + delta[3]};
                if (trial.tau > 0.0) {
                    const double trial_ssr = sum_sq_residual(trial, t, y);
                    if (trial_ssr <= ssr) {
                        const double gain = ssr - trial_ssr;
                        p = trial;
                        ssr = trial_ssr;
                        lambda = std::max(lambda * 0.1, 1e-12);
                        fit.residual_history.push_back(rms(ssr));
                        accepted = true;
                        if (gain <= 1e-15 * (ssr + 1e-300)) iter = 100;
                        break;
                    }
                }
            }
            lambda *= 10.0;
        }
        if (!accepted) {
            if (fit.residual_history.size() > 1) break;  // stalled after progress
            // Damping escalation failed on the very first step: report the
            // initial guess as a failed fit.
            fit.amplitude = initial.a;
            fit.center = initial.t0;
            fit.width = initial.tau;
            fit.offset = initial.c;
            return fit;
        }
    }

    fit.amplitude = p.a;
    fit.center = p.t0;
    fit.width = p.tau;
    fit.offset = p.c;
    fit.rms_residual = rms(ssr);
    fit.converged = true;
    return fit;
}

CombSpectrum comb_spectrum(const TimeSeries& ts, WindowFn window_fn,
                           double k_mad) {
    const std::size_t n = ts.samples.size();
    if (n < 64) throw DomainError("comb_spectrum: need at least 64 samples");

    std::vector<cplx> spec(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double w =
            window_fn == WindowFn::hann
                ? 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                        static_cast<double>(j) /
                                        static_cast<double>(n)))
                : 1.0;
        spec[j] = ts.samples[j] * w;
    }
    fft::forward(spec);

    CombSpectrum out;
    out.frequency.resize(n);
    out.power.resize(n);
    // Two-sided spectrum, reordered so frequency ascends through zero.
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = (k + half) % n;
        const double bin =
            static_cast<double>(static_cast<std::ptrdiff_t>(k) -
                                static_cast<std::ptrdiff_t>(half));
        out.frequency[k] = bin / (static_cast<double>(n) * ts.dt);
        out.power[k] = std::norm(spec[src]) / static_cast<double>(n);
    }

    const double med = median_of(out.power);
    std::vector<double> dev(n);
    for (std::size_t k = 0; k < n; ++k) dev[k] = std::abs(out.power[k] - med);
    out.noise_floor = med + k_mad * median_of(dev);
    // A near-pure spectrum leaves the off-peak bins at FFT rounding residue
    // (~1e-30 of the peak), where the median+MAD floor would flag junk as
    // lines.  Cap the detector's dynamic range at 120 dB below the top bin.
    const double p_max = *std::max_element(out.power.begin(), out.power.end());
    out.noise_floor = std::max(out.noise_floor, 1e-12 * p_max);

    for (std::size_t k = 0; k < n; ++k) {
        const double pk = out.power[k];
        if (pk <= out.noise_floor || pk <= 0.0) continue;
        if (k > 0 && out.power[k - 1] > pk) continue;
        if (k + 1 < n && out.power[k + 1] > pk) continue;
        // Plateau tie-break: keep only the first bin of an exact tie.
        if (k > 0 && out.power[k - 1] == pk) continue;
        out.lines.push_back(CombLine{out.frequency[k], pk});
    }

    if (out.lines.size() >= 2) {
        std::vector<double> gaps;
        gaps.reserve(out.lines.size() - 1);
        for (std::size_t i = 1; i < out.lines.size(); ++i)
            gaps.push_back(out.lines[i].frequency -
                           out.lines[i - 1].frequency);
        out.line_spacing = median_of(gaps);
    }
    return out;
}

PeriodStats intersoliton_periods(const std::vector<PulseWindow>& windows) {
    PeriodStats stats;
    if (windows.size() < 2) return stats;
    std::vector<double> periods;
    periods.reserve(windows.size() - 1);
    for (std::size_t i = 1; i < windows.size(); ++i)
        periods.push_back(windows[i].center_time -
                          windows[i - 1].center_time);
    stats.count = periods.size();
    double mean = 0.0;
    for (double p : periods) mean += p;
    mean /= static_cast<double>(periods.size());
    double var = 0.0;
    for (double p : periods) var += (p - mean) * (p - mean);
    var /= static_cast<double>(periods.size());  // population variance
    stats.mean = mean;
    stats.cv = mean != 0.0 ? std::sqrt(var) / std::abs(mean) : 0.0;
    return stats;
}

std::string to_string(RegimeLabel label) {
    switch (label) {
        case RegimeLabel::sub_threshold: return "sub-threshold";
        case RegimeLabel::sparse_i: return "I";
        case RegimeLabel::dense_ii: return "II";
        case RegimeLabel::cw_iii: return "III";
    }
    return "?";
}

RegimeReport classify_regime(const TimeSeries& ts,
                             const RegimeThresholds& thresholds) {
    if (ts.samples.empty()) throw DomainError("classify_regime: empty series");
    const std::vector<double> env = envelope(ts);
    const double count = static_cast<double>(env.size());

    RegimeReport report;
    double mean = 0.0, power = 0.0;
    for (double e : env) {
        mean += e;
        power += e * e;
    }
    mean /= count;
    power /= count;
    double var = 0.0;
    for (double e : env) var += (e - mean) * (e - mean);
    report.mean_output = mean;
    report.std_output = std::sqrt(var / count);

    if (ts.samples.size() >= 64) {
        const CombSpectrum spectrum =
            comb_spectrum(ts, WindowFn::hann, thresholds.k_mad);
        report.p_peak = 0.0;
        for (const auto& line : spectrum.lines)
            report.p_peak = std::max(report.p_peak, line.power);
        if (spectrum.lines.empty())
            report.p_peak =
                *std::max_element(spectrum.power.begin(), spectrum.power.end());
        report.comb_spacing = spectrum.line_spacing;
        report.p_peak_db =
            10.0 * std::log10(std::max(report.p_peak, 1e-300));
    }

    const double floor =
        thresholds.power_floor * thresholds.full_scale * thresholds.full_scale;
    if (power < floor) {
        report.label = RegimeLabel::sub_threshold;
        return report;
    }
    if (report.std_output / report.mean_output < thresholds.cw_ratio) {
        report.label = RegimeLabel::cw_iii;
        return report;
    }

    const auto windows = detect_pulses(ts, thresholds.pulse_threshold_frac,
                                       thresholds.min_gap);
    report.pulse_count = windows.size();
    std::size_t covered = 0;
    for (const auto& w : windows) covered += w.end - w.begin + 1;
    report.duty_cycle = static_cast<double>(covered) / count;
    report.periods = intersoliton_periods(windows);

    report.label = (report.duty_cycle > thresholds.duty_split ||
                    report.pulse_count > thresholds.dense_count)
                       ? RegimeLabel::dense_ii
                       : RegimeLabel::sparse_i;
    return report;
}

}  // namespace maser
