// experiment.hpp — experiment specs, figure presets, and the driver that
// runs evolutions and sweeps and persists their results.

#pragma once

#include "nqca/analysis.hpp"
#include "nqca/automaton.hpp"

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nqca {

enum class Mode { run, sweep, spectrum, fit, validate, preset };
enum class Format { csv, json };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);
std::string to_string(Format f);
Format format_from_string(const std::string& s);

// Sweepable parameters in the order they vary in a grid (last is fastest).
inline constexpr std::array<const char*, 6> sweep_axes = {"n", "theta", "phi1", "phi2", "xi", "eta"};

struct ExperimentSpec {
    Mode mode = Mode::run;
    std::string preset; // figure preset name when mode == preset
    AutomatonConfig automaton;
    int steps = 500;
    std::map<std::string, std::vector<double>> sweep;
    // file for run/spectrum/fit/validate (empty: stdout), directory for sweeps
    std::string output;
    Format format = Format::csv;
    int jobs = 1;
    int snapshot_every = 0;
    std::size_t run_cap = 10000;

    double fit_threshold = 1e-6;
    FitMode fit_mode = FitMode::raw;
    SpectrumOptions spectrum;
    // trajectory CSV whose c_s column feeds the spectrum/fit modes
    std::string input;

    // per-run extras in sweeps
    bool write_spectra = false;

    // Throws DomainError naming the offending field.
    void validate() const;
};

std::vector<std::string> preset_names();

// Fully populated spec for a figure preset. Throws DomainError listing
// the valid names on an unknown one.
ExperimentSpec preset(const std::string& name);

// Cartesian product of the sweep grids over the base config, sorted by
// (n, theta, phi1, phi2, xi, eta).
std::vector<AutomatonConfig> expand_grid(const ExperimentSpec& spec);

std::string config_key(const AutomatonConfig& c);

struct RunSummary {
    AutomatonConfig config;
    std::string key;
    double peak_c_s = 0.0;
    double plateau_c_s = 0.0; // mean C_S over steps [steps/5, steps]
    double final_c_s = 0.0;
    std::optional<DecayFit> fit;
    std::optional<double> low_frequency_fraction; // below 0.05 cycles/step
    std::string file;
};

// Observable summary of one trajectory.
RunSummary summarize(const Trajectory& traj, double fit_threshold, FitMode fit_mode);

struct ExperimentResult {
    std::vector<RunSummary> runs;
    std::vector<std::string> files;
};

// Executes the spec. `data` receives file content that has no output
// path (run/spectrum/fit/validate without --output); `log` receives the
// one-line summaries.
ExperimentResult run_experiment(const ExperimentSpec& spec, std::ostream& data, std::ostream& log);

} // namespace nqca
