// analysis.hpp — post-processing of observable time series: magnitude
// spectra, exponential decay fits, and prominent local extrema.

#pragma once

#include "nqca/types.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nqca {

enum class Window { rectangular, hann };

std::string to_string(Window w);
Window window_from_string(const std::string& s);

// One-sided magnitude spectrum.
//
// magnitudes[k] = |X_k| / T where X is the DFT of the (mean-removed,
// windowed, zero-padded) series and T is the number of input samples.
// With the rectangular window, Parseval reads
//     sum_k w_k * magnitudes[k]^2 = variance of the series,
// where w_k = 1 for the DC bin and (even length) the Nyquist bin, 2 otherwise.
// Zero padding to length M only refines the frequency grid: bin k*M/T of
// the padded spectrum equals bin k of the unpadded one.
struct SpectrumResult {
    std::vector<double> frequencies; // cycles per step, 0 .. 0.5
    std::vector<double> magnitudes;
    std::size_t samples = 0;
    std::size_t transform_length = 0;
    bool mean_removed = true;
    Window window = Window::rectangular;
};

struct SpectrumOptions {
    Window window = Window::rectangular;
    // 0 or <= series length means no padding
    std::size_t pad_to = 0;
};

// Throws DomainError for fewer than 8 samples.
SpectrumResult spectrum(std::span<const double> series, SpectrumOptions options = {});

// Fraction of sum(magnitudes) carried by bins with frequency < cutoff.
double low_frequency_fraction(const SpectrumResult& s, double cutoff);

enum class FitMode { raw, envelope };

std::string to_string(FitMode m);
FitMode fit_mode_from_string(const std::string& s);

struct DecayFit {
    double t_dec = 0.0;
    double amplitude = 0.0;
    double r_squared = 0.0;
    std::size_t window_start = 0;
    std::size_t window_end = 0; // inclusive
    std::size_t points = 0;     // samples that entered the regression
    FitMode mode = FitMode::raw;
};

// Least squares of ln(series) against t from the global maximum to the
// last sample above threshold. Samples inside the window at or below the
// threshold are skipped. envelope mode regresses only the window start and
// the strict local maxima inside the window.
//
// Throws DomainError when fewer than 10 samples follow the maximum above
// threshold, NoDecayError when the fitted slope is >= 0.
DecayFit fit_decoherence_time(std::span<const double> series, double threshold = 1e-6,
                              FitMode mode = FitMode::raw);

struct Extrema {
    std::vector<std::size_t> minima;
    std::vector<std::size_t> maxima;
};

// Strict interior local extrema whose topographic prominence is at least
// min_prominence.
Extrema local_extrema(std::span<const double> series, double min_prominence);

// 1% of max - min.
double default_prominence(std::span<const double> series);

// Prominence of the strict local maximum at index i.
double peak_prominence(std::span<const double> series, std::size_t i);

// Fraction of `points` that lie within +-tolerance steps of some entry of
// `targets`. Returns 0 for an empty `points`.
double alignment_fraction(std::span<const std::size_t> points, std::span<const std::size_t> targets,
                          std::size_t tolerance);

} // namespace nqca
