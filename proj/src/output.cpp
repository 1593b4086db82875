#include "nqca/output.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

namespace nqca {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

template <class T>
T field(const json& j, const char* name, const std::string& where) {
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        throw DomainError(where + "." + name + ": " + e.what());
    }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
    if (!j.is_object()) throw DomainError(where + ": expected a JSON object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || item.key() == k;
        if (!ok) throw DomainError(where + "." + item.key() + ": unknown field");
    }
}

json complex_array(const std::vector<cplx>& v) {
    json a = json::array();
    for (const auto& z : v) a.push_back({z.real(), z.imag()});
    return a;
}

json matrix_parts(const Matrix& m) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        json c = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            r.push_back(m(i, k).real());
            c.push_back(m(i, k).imag());
        }
        re.push_back(std::move(r));
        im.push_back(std::move(c));
    }
    return {{"real", re}, {"imag", im}};
}

void write_meta_lines(std::ostream& os, const json& meta) { os << "# config: " << meta.dump() << '\n'; }

} // namespace

json to_json(const AutomatonConfig& c) {
    json j;
    j["n"] = c.n;
    j["theta"] = c.theta;
    j["phi1"] = c.phi1;
    j["phi2"] = c.phi2;
    j["xi"] = c.xi;
    j["eta"] = c.eta;
    j["boundary"] = to_string(c.boundary);
    if (c.vacuum.is_first()) {
        j["vacuum_policy"] = "first";
    } else {
        j["vacuum_policy"] = c.vacuum.weights();
    }
    if (const int* site = std::get_if<int>(&c.initial)) {
        j["initial"] = *site;
    } else {
        j["initial"] = complex_array(std::get<std::vector<cplx>>(c.initial));
    }
    j["basis_convention"] = std::string(basis_convention);
    return j;
}

AutomatonConfig config_from_json(const json& j, AutomatonConfig c) {
    const std::string where = "automaton";
    reject_unknown(j, {"n", "theta", "phi1", "phi2", "xi", "eta", "boundary", "vacuum_policy", "initial",
                       "basis_convention"},
                   where);
    if (j.contains("n")) c.n = field<int>(j, "n", where);
    if (j.contains("theta")) c.theta = field<double>(j, "theta", where);
    if (j.contains("phi1")) c.phi1 = field<double>(j, "phi1", where);
    if (j.contains("phi2")) c.phi2 = field<double>(j, "phi2", where);
    if (j.contains("xi")) c.xi = field<double>(j, "xi", where);
    if (j.contains("eta")) c.eta = field<double>(j, "eta", where);
    if (j.contains("boundary")) c.boundary = boundary_from_string(field<std::string>(j, "boundary", where));
    if (j.contains("vacuum_policy")) {
        const json& v = j.at("vacuum_policy");
        if (v.is_string() && v.get<std::string>() == "first") {
            c.vacuum = VacuumPolicy::first();
        } else if (v.is_array()) {
            c.vacuum = VacuumPolicy::custom(field<std::vector<double>>(j, "vacuum_policy", where));
        } else {
            throw DomainError("automaton.vacuum_policy: expected \"first\" or an array of weights");
        }
    }
    if (j.contains("initial")) {
        const json& v = j.at("initial");
        if (v.is_number_integer()) {
            c.initial = v.get<int>();
        } else if (v.is_array()) {
            std::vector<cplx> amps;
            for (const auto& e : v) {
                if (e.is_number()) {
                    amps.emplace_back(e.get<double>(), 0.0);
                } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
                    amps.emplace_back(e[0].get<double>(), e[1].get<double>());
                } else {
                    throw DomainError("automaton.initial: amplitudes must be numbers or [re, im] pairs");
                }
            }
            c.initial = std::move(amps);
        } else {
            throw DomainError("automaton.initial: expected a site index or an amplitude array");
        }
    }
    return c;
}

json to_json(const ExperimentSpec& s) {
    json j;
    j["mode"] = to_string(s.mode);
    if (!s.preset.empty()) j["preset"] = s.preset;
    j["automaton"] = to_json(s.automaton);
    j["steps"] = s.steps;
    j["sweep"] = json::object();
    for (const auto& [axis, values] : s.sweep) j["sweep"][axis] = values;
    j["output"] = s.output;
    j["format"] = to_string(s.format);
    j["jobs"] = s.jobs;
    j["snapshot_every"] = s.snapshot_every;
    j["run_cap"] = s.run_cap;
    j["fit"] = {{"threshold", s.fit_threshold}, {"mode", to_string(s.fit_mode)}};
    j["spectrum"] = {{"window", to_string(s.spectrum.window)}, {"pad_to", s.spectrum.pad_to}};
    j["input"] = s.input;
    j["write_spectra"] = s.write_spectra;
    return j;
}

ExperimentSpec spec_from_json(const json& j, ExperimentSpec s) {
    const std::string where = "spec";
    reject_unknown(j, {"mode", "preset", "automaton", "steps", "sweep", "output", "format", "jobs",
                       "snapshot_every", "run_cap", "fit", "spectrum", "input", "write_spectra"},
                   where);
    if (j.contains("mode")) s.mode = mode_from_string(field<std::string>(j, "mode", where));
    if (j.contains("preset")) s.preset = field<std::string>(j, "preset", where);
    if (j.contains("automaton")) s.automaton = config_from_json(j.at("automaton"), s.automaton);
    if (j.contains("steps")) s.steps = field<int>(j, "steps", where);
    if (j.contains("sweep")) {
        const json& sw = j.at("sweep");
        if (!sw.is_object()) throw DomainError("spec.sweep: expected an object of axis grids");
        s.sweep.clear();
        for (const auto& item : sw.items()) {
            try {
                s.sweep[item.key()] = item.value().get<std::vector<double>>();
            } catch (const json::exception& e) {
                throw DomainError("spec.sweep." + item.key() + ": " + e.what());
            }
        }
    }
    if (j.contains("output")) s.output = field<std::string>(j, "output", where);
    if (j.contains("format")) s.format = format_from_string(field<std::string>(j, "format", where));
    if (j.contains("jobs")) s.jobs = field<int>(j, "jobs", where);
    if (j.contains("snapshot_every")) s.snapshot_every = field<int>(j, "snapshot_every", where);
    if (j.contains("run_cap")) s.run_cap = field<std::size_t>(j, "run_cap", where);
    if (j.contains("fit")) {
        const json& f = j.at("fit");
        reject_unknown(f, {"threshold", "mode"}, "spec.fit");
        if (f.contains("threshold")) s.fit_threshold = field<double>(f, "threshold", "spec.fit");
        if (f.contains("mode")) s.fit_mode = fit_mode_from_string(field<std::string>(f, "mode", "spec.fit"));
    }
    if (j.contains("spectrum")) {
        const json& f = j.at("spectrum");
        reject_unknown(f, {"window", "pad_to"}, "spec.spectrum");
        if (f.contains("window")) {
            s.spectrum.window = window_from_string(field<std::string>(f, "window", "spec.spectrum"));
        }
        if (f.contains("pad_to")) s.spectrum.pad_to = field<std::size_t>(f, "pad_to", "spec.spectrum");
    }
    if (j.contains("input")) s.input = field<std::string>(j, "input", where);
    if (j.contains("write_spectra")) s.write_spectra = field<bool>(j, "write_spectra", where);
    return s;
}

json to_json(const DecayFit& f) {
    return {{"t_dec", f.t_dec},
            {"amplitude", f.amplitude},
            {"r_squared", f.r_squared},
            {"window_start", f.window_start},
            {"window_end", f.window_end},
            {"points", f.points},
            {"mode", to_string(f.mode)}};
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    write_meta_lines(os, to_json(traj.config));
    os << "step,c_s,c_1,mean_x,purity,trace_dev\n";
    for (const auto& r : traj.records) {
        os << r.step << ',' << format_double(r.c_s) << ',' << format_double(r.c_1) << ','
           << format_double(r.mean_x) << ',' << format_double(r.purity) << ',' << format_double(r.trace_dev)
           << '\n';
    }
}

json trajectory_to_json(const Trajectory& traj) {
    json j;
    j["config"] = to_json(traj.config);
    json rec = json::array();
    for (const auto& r : traj.records) {
        rec.push_back({{"step", r.step},
                       {"c_s", r.c_s},
                       {"c_1", r.c_1},
                       {"mean_x", r.mean_x},
                       {"purity", r.purity},
                       {"trace_dev", r.trace_dev}});
    }
    j["records"] = std::move(rec);
    if (!traj.snapshots.empty()) {
        json snaps = json::array();
        for (const auto& s : traj.snapshots) {
            json e = matrix_parts(s.state.matrix());
            e["step"] = s.step;
            snaps.push_back(std::move(e));
        }
        j["snapshots"] = std::move(snaps);
    }
    return j;
}

void write_spectrum_csv(std::ostream& os, const SpectrumResult& s, const json& meta) {
    json m = meta;
    m["spectrum"] = {{"samples", s.samples},
                     {"transform_length", s.transform_length},
                     {"mean_removed", s.mean_removed},
                     {"window", to_string(s.window)},
                     {"normalization", "|X_k| / samples"}};
    write_meta_lines(os, m);
    os << "freq_cycles_per_step,magnitude\n";
    for (std::size_t k = 0; k < s.frequencies.size(); ++k) {
        os << format_double(s.frequencies[k]) << ',' << format_double(s.magnitudes[k]) << '\n';
    }
}

json spectrum_to_json(const SpectrumResult& s, const json& meta) {
    return {{"config", meta},
            {"samples", s.samples},
            {"transform_length", s.transform_length},
            {"mean_removed", s.mean_removed},
            {"window", to_string(s.window)},
            {"normalization", "|X_k| / samples"},
            {"freq_cycles_per_step", s.frequencies},
            {"magnitude", s.magnitudes}};
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

std::vector<double> read_csv_column(const fs::path& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    std::optional<std::size_t> index;
    std::vector<double> out;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) {
            while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
            while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
            cells.push_back(cell);
        }
        if (!index) {
            for (std::size_t k = 0; k < cells.size(); ++k) {
                if (cells[k] == column) index = k;
            }
            if (!index) throw DomainError(path.string() + ": no column named '" + column + "'");
            continue;
        }
        if (*index >= cells.size()) throw DomainError(path.string() + ": short row '" + line + "'");
        try {
            out.push_back(std::stod(cells[*index]));
        } catch (const std::exception&) {
            throw DomainError(path.string() + ": cannot parse '" + cells[*index] + "' as a number");
        }
    }
    if (!index) throw DomainError(path.string() + ": missing header row");
    return out;
}

} // namespace nqca
