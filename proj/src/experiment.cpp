#include "nqca/experiment.hpp"

#include "nqca/coherence_metrics.hpp"
#include "nqca/output.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

namespace nqca {

namespace fs = std::filesystem;

std::string to_string(Mode m) {
    switch (m) {
    case Mode::run: return "run";
    case Mode::sweep: return "sweep";
    case Mode::spectrum: return "spectrum";
    case Mode::fit: return "fit";
    case Mode::validate: return "validate";
    case Mode::preset: return "preset";
    }
    return "run";
}

Mode mode_from_string(const std::string& s) {
    for (Mode m : {Mode::run, Mode::sweep, Mode::spectrum, Mode::fit, Mode::validate, Mode::preset}) {
        if (to_string(m) == s) return m;
    }
    throw DomainError("mode must be one of run|sweep|spectrum|fit|validate|preset, got '" + s + "'");
}

std::string to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

Format format_from_string(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw DomainError("format must be 'csv' or 'json', got '" + s + "'");
}

namespace {

// defaults for figure parameters the source figures leave unstated
const std::vector<double> noise_grid = {0.01, 0.02, 0.05, 0.1, 0.2, 0.3};
const std::vector<double> length_grid = {5, 7, 11, 15, 21};

void set_axis(AutomatonConfig& c, const std::string& axis, double v) {
    if (axis == "n") {
        c.n = static_cast<int>(v);
    } else if (axis == "theta") {
        c.theta = v;
    } else if (axis == "phi1") {
        c.phi1 = v;
    } else if (axis == "phi2") {
        c.phi2 = v;
    } else if (axis == "xi") {
        c.xi = v;
    } else if (axis == "eta") {
        c.eta = v;
    }
}

auto sort_key(const AutomatonConfig& c) { return std::make_tuple(c.n, c.theta, c.phi1, c.phi2, c.xi, c.eta); }

std::size_t grid_size(const ExperimentSpec& spec) {
    std::size_t total = 1;
    for (const auto& [axis, values] : spec.sweep) {
        if (values.empty()) return 0;
        if (total > spec.run_cap) break;
        total *= values.size();
    }
    return total;
}

double plateau_mean(const std::vector<double>& cs) {
    const std::size_t steps = cs.size() - 1;
    const std::size_t from = steps / 5;
    double sum = 0.0;
    for (std::size_t k = from; k < cs.size(); ++k) sum += cs[k];
    return sum / static_cast<double>(cs.size() - from);
}

std::string summary_line(const RunSummary& r) {
    std::ostringstream os;
    os << "N=" << r.config.n << " xi=" << r.config.xi << " eta=" << r.config.eta
       << " peak_c_s=" << format_double(r.peak_c_s);
    if (r.fit) {
        os << " t_dec=" << format_double(r.fit->t_dec) << " r2=" << r.fit->r_squared;
    } else {
        os << " t_dec=n/a";
    }
    if (!r.file.empty()) os << " -> " << r.file;
    return os.str();
}

std::string render_trajectory(const Trajectory& traj, Format format) {
    if (format == Format::json) return trajectory_to_json(traj).dump(2) + "\n";
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    return os.str();
}

void emit(const std::string& path, const std::string& content, std::ostream& data) {
    if (path.empty()) {
        data << content;
    } else {
        write_file_atomic(path, content);
    }
}

void write_snapshot_sidecar(const Trajectory& traj, const fs::path& path) {
    if (traj.snapshots.empty()) return;
    json j = trajectory_to_json(traj);
    j.erase("records");
    write_file_atomic(path, j.dump() + "\n");
}

std::vector<double> input_series(const ExperimentSpec& spec, json& meta) {
    if (!spec.input.empty()) {
        meta = {{"input", spec.input}, {"column", "c_s"}};
        return read_csv_column(spec.input, "c_s");
    }
    meta = to_json(spec.automaton);
    meta["steps"] = spec.steps;
    return evolve(spec.automaton, spec.steps).c_s();
}

ExperimentResult run_single(const ExperimentSpec& spec, std::ostream& data, std::ostream& log) {
    ExperimentResult result;
    const Trajectory traj = evolve(spec.automaton, spec.steps, spec.snapshot_every);
    emit(spec.output, render_trajectory(traj, spec.format), data);
    if (spec.format == Format::csv && !traj.snapshots.empty()) {
        const fs::path side = spec.output.empty() ? fs::path("snapshots.json")
                                                  : fs::path(spec.output + ".snapshots.json");
        write_snapshot_sidecar(traj, side);
        result.files.push_back(side.string());
    }
    RunSummary s = summarize(traj, spec.fit_threshold, spec.fit_mode);
    s.file = spec.output;
    if (!spec.output.empty()) result.files.push_back(spec.output);
    log << summary_line(s) << '\n';
    result.runs.push_back(std::move(s));
    return result;
}

ExperimentResult run_spectrum(const ExperimentSpec& spec, std::ostream& data, std::ostream& log) {
    json meta;
    const auto series = input_series(spec, meta);
    const SpectrumResult s = spectrum(series, spec.spectrum);
    std::string content;
    if (spec.format == Format::json) {
        content = spectrum_to_json(s, meta).dump(2) + "\n";
    } else {
        std::ostringstream os;
        write_spectrum_csv(os, s, meta);
        content = os.str();
    }
    emit(spec.output, content, data);
    const auto peak = std::max_element(s.magnitudes.begin(), s.magnitudes.end());
    log << "spectrum: " << s.samples << " samples, dominant bin "
        << format_double(s.frequencies[static_cast<std::size_t>(peak - s.magnitudes.begin())])
        << " cycles/step, low-frequency fraction (<0.05) " << low_frequency_fraction(s, 0.05) << '\n';
    ExperimentResult r;
    if (!spec.output.empty()) r.files.push_back(spec.output);
    return r;
}

ExperimentResult run_fit(const ExperimentSpec& spec, std::ostream& data, std::ostream& log) {
    json meta;
    const auto series = input_series(spec, meta);
    const DecayFit fit = fit_decoherence_time(series, spec.fit_threshold, spec.fit_mode);
    json j = to_json(fit);
    j["config"] = meta;
    j["threshold"] = spec.fit_threshold;
    emit(spec.output, j.dump(2) + "\n", data);
    log << "fit: t_dec=" << format_double(fit.t_dec) << " amplitude=" << format_double(fit.amplitude)
        << " r2=" << fit.r_squared << " window=[" << fit.window_start << "," << fit.window_end << "]\n";
    ExperimentResult r;
    if (!spec.output.empty()) r.files.push_back(spec.output);
    return r;
}

ExperimentResult run_validate(const ExperimentSpec& spec, std::ostream& data, std::ostream& log) {
    constexpr double state_tol = 1e-10;
    constexpr double map_tol = 1e-12;
    const Automaton automaton(spec.automaton);
    const CptpReport cptp = verify_cptp(automaton.pair_map().kraus, map_tol);

    double worst_herm = 0.0;
    double worst_trace = 0.0;
    double min_eig = 1.0;
    int first_bad = -1;
    Matrix rho = automaton.config().initial_state().matrix();
    for (int t = 0; t <= spec.steps; ++t) {
        const StateReport r = validate_state(rho, state_tol);
        worst_herm = std::max(worst_herm, r.hermiticity_deviation);
        worst_trace = std::max(worst_trace, r.trace_deviation);
        min_eig = std::min(min_eig, r.min_eigenvalue);
        if (!r.ok() && first_bad < 0) first_bad = t;
        if (t < spec.steps) automaton.step_inplace(rho);
    }

    const Matrix2& cross = automaton.pair_map().cross;
    Eigen::JacobiSVD<Matrix2> svd(cross);
    json report;
    report["config"] = to_json(spec.automaton);
    report["steps"] = spec.steps;
    report["cptp"] = {{"tolerance", map_tol},
                      {"completeness_deviation", cptp.completeness_deviation},
                      {"choi_min_eigenvalue", cptp.choi_min_eigenvalue},
                      {"passed", cptp.passed()}};
    report["kraus_operators"] = automaton.pair_map().kraus.operators.size();
    report["cross_singular_values"] = {svd.singularValues()(0), svd.singularValues()(1)};
    report["states"] = {{"tolerance", state_tol},
                        {"max_hermiticity_deviation", worst_herm},
                        {"max_trace_deviation", worst_trace},
                        {"min_eigenvalue", min_eig},
                        {"first_violation_step", first_bad}};
    const bool passed = cptp.passed() && first_bad < 0;
    report["passed"] = passed;
    emit(spec.output, report.dump(2) + "\n", data);
    log << "validate: " << (passed ? "ok" : "FAILED") << " (completeness " << cptp.completeness_deviation
        << ", min eigenvalue " << min_eig << ", max trace deviation " << worst_trace << ")\n";
    if (!passed) throw InvalidStateError("validate: numerical invariant violated");
    ExperimentResult r;
    if (!spec.output.empty()) r.files.push_back(spec.output);
    return r;
}

std::string run_file_name(std::size_t index, const char* suffix, Format format) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "run_%04zu%s.%s", index, suffix, format == Format::csv ? "csv" : "json");
    return buf;
}

ExperimentResult run_sweep(const ExperimentSpec& spec, std::ostream& log) {
    const auto configs = expand_grid(spec);
    const fs::path dir = spec.output.empty()
                             ? fs::path(spec.mode == Mode::preset ? spec.preset + "_results" : "sweep_results")
                             : fs::path(spec.output);

    std::vector<RunSummary> summaries(configs.size());
    std::vector<std::exception_ptr> errors(configs.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            try {
                const Trajectory traj = evolve(configs[i], spec.steps, spec.snapshot_every);
                const std::string name = run_file_name(i, "", spec.format);
                write_file_atomic(dir / name, render_trajectory(traj, spec.format));
                if (spec.format == Format::csv) {
                    write_snapshot_sidecar(traj, dir / run_file_name(i, "_snapshots", Format::json));
                }
                if (spec.write_spectra) {
                    const SpectrumResult s = spectrum(traj.c_s(), spec.spectrum);
                    json meta = to_json(configs[i]);
                    meta["steps"] = spec.steps;
                    std::string content;
                    if (spec.format == Format::json) {
                        content = spectrum_to_json(s, meta).dump() + "\n";
                    } else {
                        std::ostringstream os;
                        write_spectrum_csv(os, s, meta);
                        content = os.str();
                    }
                    write_file_atomic(dir / run_file_name(i, "_spectrum", spec.format), content);
                }
                summaries[i] = summarize(traj, spec.fit_threshold, spec.fit_mode);
                summaries[i].file = name;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(spec.jobs), configs.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    ExperimentResult result;
    std::ostringstream table;
    json meta = to_json(spec);
    table << "# spec: " << meta.dump() << '\n';
    table << "run,n,theta,phi1,phi2,xi,eta,peak_c_s,plateau_c_s,ln_n,final_c_s,t_dec,r_squared,"
             "low_freq_fraction,file\n";
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        const RunSummary& s = summaries[i];
        const AutomatonConfig& c = s.config;
        table << i << ',' << c.n << ',' << format_double(c.theta) << ',' << format_double(c.phi1) << ','
              << format_double(c.phi2) << ',' << format_double(c.xi) << ',' << format_double(c.eta) << ','
              << format_double(s.peak_c_s) << ',' << format_double(s.plateau_c_s) << ','
              << format_double(std::log(static_cast<double>(c.n))) << ',' << format_double(s.final_c_s) << ','
              << (s.fit ? format_double(s.fit->t_dec) : "") << ','
              << (s.fit ? format_double(s.fit->r_squared) : "") << ','
              << (s.low_frequency_fraction ? format_double(*s.low_frequency_fraction) : "") << ',' << s.file
              << '\n';
        log << summary_line(s) << '\n';
        result.files.push_back((dir / s.file).string());
    }
    write_file_atomic(dir / "summary.csv", table.str());
    result.files.push_back((dir / "summary.csv").string());

    if (spec.mode == Mode::preset && spec.preset == "fig3" && summaries.size() == 2) {
        const RunSummary& a = summaries[0];
        const RunSummary& b = summaries[1];
        const RunSummary& low = a.plateau_c_s <= b.plateau_c_s ? a : b;
        const RunSummary& high = a.plateau_c_s <= b.plateau_c_s ? b : a;
        json loc;
        loc["localising_phase_sum"] = low.config.phi1 + low.config.phi2;
        loc["localising_plateau_c_s"] = low.plateau_c_s;
        loc["extended_phase_sum"] = high.config.phi1 + high.config.phi2;
        loc["extended_plateau_c_s"] = high.plateau_c_s;
        loc["relative_difference"] = (high.plateau_c_s - low.plateau_c_s) / high.plateau_c_s;
        write_file_atomic(dir / "localisation.json", loc.dump(2) + "\n");
        result.files.push_back((dir / "localisation.json").string());
        log << "localising setting: phi1+phi2=" << format_double(low.config.phi1 + low.config.phi2) << '\n';
    }

    result.runs = std::move(summaries);
    return result;
}

} // namespace

void ExperimentSpec::validate() const {
    if (steps < 0) throw DomainError("steps: must be >= 0, got " + std::to_string(steps));
    if (jobs < 1) throw DomainError("jobs: must be >= 1, got " + std::to_string(jobs));
    if (snapshot_every < 0) throw DomainError("snapshot_every: must be >= 0");
    if (run_cap < 1) throw DomainError("run_cap: must be >= 1");
    if (!(fit_threshold > 0.0)) throw DomainError("fit.threshold: must be positive");
    if (mode == Mode::preset) {
        const auto names = preset_names();
        if (std::find(names.begin(), names.end(), preset) == names.end()) {
            throw DomainError("preset: unknown name '" + preset + "'");
        }
    }
    for (const auto& [axis, values] : sweep) {
        if (std::find(sweep_axes.begin(), sweep_axes.end(), axis) == sweep_axes.end()) {
            throw DomainError("sweep." + axis + ": unknown axis (use n, theta, phi1, phi2, xi, eta)");
        }
        if (values.empty()) throw DomainError("sweep." + axis + ": grid is empty");
        if (axis == "n") {
            for (double v : values) {
                if (v != std::floor(v) || v < 2) throw DomainError("sweep.n: lengths must be integers >= 2");
            }
        }
    }
    if (grid_size(*this) > run_cap) {
        throw DomainError("sweep: grid exceeds run cap of " + std::to_string(run_cap) + " runs");
    }
    if (mode == Mode::sweep || mode == Mode::preset) {
        for (const auto& c : expand_grid(*this)) c.validate();
    } else {
        automaton.validate();
    }
    if (mode == Mode::spectrum && input.empty() && steps + 1 < 8) {
        throw DomainError("steps: spectrum needs at least 7 steps");
    }
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4", "fig5", "fig6"}; }

ExperimentSpec preset(const std::string& name) {
    ExperimentSpec s;
    s.mode = Mode::preset;
    s.preset = name;
    s.steps = 500;
    s.automaton = AutomatonConfig{};
    s.automaton.theta = pi / 4.0;
    if (name == "fig2") {
        // noiseless growth and saturation for several lengths
        s.sweep["n"] = {5, 10, 15, 20};
    } else if (name == "fig3") {
        s.automaton.n = 15;
        s.sweep["phi1"] = {0.0, pi};
    } else if (name == "fig4") {
        s.automaton.n = 15;
        s.automaton.phi1 = pi;
        s.sweep["n"] = length_grid;
        s.sweep["xi"] = noise_grid;
    } else if (name == "fig5") {
        s.sweep["n"] = length_grid;
        s.sweep["xi"] = {0.0, 0.1};
        s.write_spectra = true;
    } else if (name == "fig6") {
        s.automaton.n = 15;
        std::vector<double> etas;
        for (auto it = noise_grid.rbegin(); it != noise_grid.rend(); ++it) etas.push_back(-*it);
        etas.insert(etas.end(), noise_grid.begin(), noise_grid.end());
        s.sweep["eta"] = etas;
        s.sweep["phi1"] = {0.0, pi};
    } else {
        std::string valid;
        for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
        throw DomainError("unknown preset '" + name + "'; valid presets: " + valid);
    }
    return s;
}

std::vector<AutomatonConfig> expand_grid(const ExperimentSpec& spec) {
    std::vector<AutomatonConfig> out{spec.automaton};
    for (const char* axis : sweep_axes) {
        const auto it = spec.sweep.find(axis);
        if (it == spec.sweep.end()) continue;
        std::vector<AutomatonConfig> next;
        next.reserve(out.size() * it->second.size());
        for (const auto& base : out) {
            for (double v : it->second) {
                AutomatonConfig c = base;
                set_axis(c, axis, v);
                next.push_back(std::move(c));
            }
        }
        out = std::move(next);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return sort_key(a) < sort_key(b); });
    return out;
}

std::string config_key(const AutomatonConfig& c) {
    return "n=" + std::to_string(c.n) + ";theta=" + format_double(c.theta) + ";phi1=" + format_double(c.phi1) +
           ";phi2=" + format_double(c.phi2) + ";xi=" + format_double(c.xi) + ";eta=" + format_double(c.eta);
}

RunSummary summarize(const Trajectory& traj, double fit_threshold, FitMode fit_mode) {
    RunSummary s;
    s.config = traj.config;
    s.key = config_key(traj.config);
    const auto cs = traj.c_s();
    s.peak_c_s = *std::max_element(cs.begin(), cs.end());
    s.plateau_c_s = plateau_mean(cs);
    s.final_c_s = cs.back();
    try {
        s.fit = fit_decoherence_time(cs, fit_threshold, fit_mode);
    } catch (const DomainError&) {
    } catch (const NoDecayError&) {
    }
    if (cs.size() >= 8) s.low_frequency_fraction = low_frequency_fraction(spectrum(cs), 0.05);
    return s;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, std::ostream& data, std::ostream& log) {
    spec.validate();
    switch (spec.mode) {
    case Mode::run: return run_single(spec, data, log);
    case Mode::spectrum: return run_spectrum(spec, data, log);
    case Mode::fit: return run_fit(spec, data, log);
    case Mode::validate: return run_validate(spec, data, log);
    case Mode::sweep:
    case Mode::preset: return run_sweep(spec, log);
    }
    return {};
}

} // namespace nqca
