#include "nqca/analysis.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nqca {

std::string to_string(Window w) { return w == Window::rectangular ? "rectangular" : "hann"; }

Window window_from_string(const std::string& s) {
    if (s == "rectangular") return Window::rectangular;
    if (s == "hann") return Window::hann;
    throw DomainError("window must be 'rectangular' or 'hann', got '" + s + "'");
}

std::string to_string(FitMode m) { return m == FitMode::raw ? "raw" : "envelope"; }

FitMode fit_mode_from_string(const std::string& s) {
    if (s == "raw") return FitMode::raw;
    if (s == "envelope") return FitMode::envelope;
    throw DomainError("fit mode must be 'raw' or 'envelope', got '" + s + "'");
}

SpectrumResult spectrum(std::span<const double> series, SpectrumOptions options) {
    const std::size_t t = series.size();
    if (t < 8) throw DomainError("spectrum: need at least 8 samples, got " + std::to_string(t));
    const std::size_t m = std::max(t, options.pad_to);

    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(t);
    std::vector<double> x(m, 0.0);
    for (std::size_t k = 0; k < t; ++k) {
        double w = 1.0;
        if (options.window == Window::hann) {
            w = 0.5 * (1.0 - std::cos(2.0 * pi * static_cast<double>(k) / static_cast<double>(t - 1)));
        }
        x[k] = w * (series[k] - mean);
    }

    Eigen::FFT<double> fft;
    std::vector<cplx> freq;
    fft.fwd(freq, x);

    SpectrumResult r;
    r.samples = t;
    r.transform_length = m;
    r.window = options.window;
    const std::size_t bins = m / 2 + 1;
    r.frequencies.resize(bins);
    r.magnitudes.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        r.frequencies[k] = static_cast<double>(k) / static_cast<double>(m);
        r.magnitudes[k] = std::abs(freq[k]) / static_cast<double>(t);
    }
    return r;
}

double low_frequency_fraction(const SpectrumResult& s, double cutoff) {
    double low = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < s.magnitudes.size(); ++k) {
        total += s.magnitudes[k];
        if (s.frequencies[k] < cutoff) low += s.magnitudes[k];
    }
    return total > 0.0 ? low / total : 0.0;
}

DecayFit fit_decoherence_time(std::span<const double> series, double threshold, FitMode mode) {
    if (series.empty()) throw DomainError("fit_decoherence_time: empty series");
    if (!(threshold > 0.0)) throw DomainError("fit_decoherence_time: threshold must be positive");

    const auto peak = std::max_element(series.begin(), series.end());
    const std::size_t start = static_cast<std::size_t>(peak - series.begin());
    std::size_t end = start;
    for (std::size_t k = series.size(); k-- > start;) {
        if (series[k] > threshold) {
            end = k;
            break;
        }
    }
    const auto above = std::count_if(series.begin() + static_cast<std::ptrdiff_t>(start) + 1,
                                     series.begin() + static_cast<std::ptrdiff_t>(end) + 1,
                                     [threshold](double v) { return v > threshold; });
    if (*peak <= threshold || above < 10) {
        throw DomainError("fit_decoherence_time: fewer than 10 samples above threshold after the maximum");
    }

    std::vector<double> ts;
    std::vector<double> ys;
    for (std::size_t k = start; k <= end; ++k) {
        if (series[k] <= threshold) continue;
        if (mode == FitMode::envelope && k != start) {
            const bool interior = k + 1 < series.size();
            if (!interior || !(series[k] > series[k - 1] && series[k] > series[k + 1])) continue;
        }
        ts.push_back(static_cast<double>(k));
        ys.push_back(std::log(series[k]));
    }
    if (ts.size() < 3) {
        throw DomainError("fit_decoherence_time: fewer than 3 points in the " + to_string(mode) + " fit");
    }

    const double n = static_cast<double>(ts.size());
    const double tm = std::accumulate(ts.begin(), ts.end(), 0.0) / n;
    const double ym = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double stt = 0.0;
    double sty = 0.0;
    double syy = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        stt += (ts[k] - tm) * (ts[k] - tm);
        sty += (ts[k] - tm) * (ys[k] - ym);
        syy += (ys[k] - ym) * (ys[k] - ym);
    }
    const double slope = sty / stt;
    if (!(slope < 0.0)) {
        throw NoDecayError("fit_decoherence_time: series does not decay (slope " + std::to_string(slope) + ")");
    }
    const double intercept = ym - slope * tm;

    double ss_res = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double e = ys[k] - (intercept + slope * ts[k]);
        ss_res += e * e;
    }

    DecayFit fit;
    fit.t_dec = -1.0 / slope;
    fit.amplitude = std::exp(intercept);
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    fit.window_start = start;
    fit.window_end = end;
    fit.points = ts.size();
    fit.mode = mode;
    return fit;
}

double peak_prominence(std::span<const double> series, std::size_t i) {
    const double h = series[i];
    double left_min = h;
    for (std::size_t k = i; k-- > 0;) {
        if (series[k] > h) break;
        left_min = std::min(left_min, series[k]);
    }
    double right_min = h;
    for (std::size_t k = i + 1; k < series.size(); ++k) {
        if (series[k] > h) break;
        right_min = std::min(right_min, series[k]);
    }
    return h - std::max(left_min, right_min);
}

Extrema local_extrema(std::span<const double> series, double min_prominence) {
    Extrema out;
    if (series.size() < 3) return out;
    std::vector<double> negated(series.size());
    std::transform(series.begin(), series.end(), negated.begin(), [](double v) { return -v; });

    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        if (series[i] > series[i - 1] && series[i] > series[i + 1]) {
            if (peak_prominence(series, i) >= min_prominence) out.maxima.push_back(i);
        } else if (series[i] < series[i - 1] && series[i] < series[i + 1]) {
            if (peak_prominence(negated, i) >= min_prominence) out.minima.push_back(i);
        }
    }
    return out;
}

double default_prominence(std::span<const double> series) {
    if (series.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    return 0.01 * (*hi - *lo);
}

double alignment_fraction(std::span<const std::size_t> points, std::span<const std::size_t> targets,
                          std::size_t tolerance) {
    if (points.empty()) return 0.0;
    std::size_t hits = 0;
    for (std::size_t p : points) {
        const bool near = std::any_of(targets.begin(), targets.end(), [&](std::size_t t) {
            return (p > t ? p - t : t - p) <= tolerance;
        });
        if (near) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(points.size());
}

} // namespace nqca
