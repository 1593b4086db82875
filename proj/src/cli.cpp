#include "nqca/cli.hpp"

#include "nqca/output.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

namespace nqca::cli {

namespace {

struct HelpRequested {
    std::string text;
};

struct Flags {
    std::string config_file;
    int n = 0;
    int steps = 0;
    double theta = 0.0, phi1 = 0.0, phi2 = 0.0, xi = 0.0, eta = 0.0, p = 0.0, q = 0.0;
    std::string boundary, vacuum, output, format, preset_name, input, window, fit_mode;
    int init = 0, jobs = 0, snapshot_every = 0;
    std::size_t run_cap = 0, pad_to = 0;
    double fit_threshold = 0.0;
    std::vector<std::string> grids;
};

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw DomainError(what + ": cannot parse '" + item + "' as a number");
        }
    }
    if (out.empty()) throw DomainError(what + ": empty list");
    return out;
}

VacuumPolicy parse_vacuum(const std::string& text) {
    if (text == "first") return VacuumPolicy::first();
    const std::string prefix = "custom:";
    if (text.rfind(prefix, 0) == 0) return VacuumPolicy::custom(parse_list(text.substr(prefix.size()), "--vacuum-policy"));
    throw DomainError("--vacuum-policy: expected 'first' or 'custom:<w1,w2,...>', got '" + text + "'");
}

ExperimentSpec parse_impl(const std::vector<std::string>& args) {
    CLI::App app{"Noisy quantum cellular automaton simulator (single-excitation sector)", "nqca"};
    app.require_subcommand(1, 1);
    Flags f;

    auto* config_opt = app.add_option("--config", f.config_file, "JSON experiment spec; flags override it");
    auto* n_opt = app.add_option("--n", f.n, "chain length N");
    auto* steps_opt = app.add_option("--steps", f.steps, "number of time steps");
    auto* theta_opt = app.add_option("--theta", f.theta, "pair unitary angle theta (rad)");
    auto* phi1_opt = app.add_option("--phi1", f.phi1, "phase phi1 (rad)");
    auto* phi2_opt = app.add_option("--phi2", f.phi2, "phase phi2 (rad)");
    auto* xi_opt = app.add_option("--xi", f.xi, "dephasing strength in [0,1]");
    auto* eta_opt = app.add_option("--eta", f.eta, "damping strength in [-1,1]");
    auto* p_opt = app.add_option("--p", f.p, "transfer parameter p (with --q, replaces --eta/--theta)");
    auto* q_opt = app.add_option("--q", f.q, "transfer parameter q (with --p)");
    p_opt->needs(q_opt);
    q_opt->needs(p_opt);
    p_opt->excludes(eta_opt)->excludes(theta_opt);
    q_opt->excludes(eta_opt)->excludes(theta_opt);
    auto* boundary_opt = app.add_option("--boundary", f.boundary, "open|periodic");
    auto* init_opt = app.add_option("--init", f.init, "initially excited site (1-based)");
    auto* vacuum_opt = app.add_option("--vacuum-policy", f.vacuum, "first|custom:<w1,w2,...>");
    auto* output_opt = app.add_option("--output", f.output, "output file (directory for sweeps/presets)");
    auto* format_opt = app.add_option("--format", f.format, "csv|json");
    auto* jobs_opt = app.add_option("--jobs", f.jobs, "concurrent runs in sweeps");
    auto* snap_opt = app.add_option("--snapshot-every", f.snapshot_every, "store the state every k steps");
    auto* grid_opt = app.add_option("--grid", f.grids, "sweep axis, e.g. xi=0.01,0.1 (repeatable)");
    auto* cap_opt = app.add_option("--run-cap", f.run_cap, "maximum number of sweep runs");
    auto* input_opt = app.add_option("--input", f.input, "trajectory CSV to analyse (spectrum/fit)");
    auto* window_opt = app.add_option("--window", f.window, "rectangular|hann");
    auto* pad_opt = app.add_option("--pad-to", f.pad_to, "zero-pad the series to this length");
    auto* thr_opt = app.add_option("--fit-threshold", f.fit_threshold, "floor below which samples leave the fit");
    auto* fit_mode_opt = app.add_option("--fit-mode", f.fit_mode, "raw|envelope");
    auto* spectra_flag = app.add_flag("--spectra", "write a C_S spectrum per sweep run");

    auto* run_cmd = app.add_subcommand("run", "evolve one configuration and write its trajectory");
    auto* sweep_cmd = app.add_subcommand("sweep", "evolve a parameter grid");
    auto* spectrum_cmd = app.add_subcommand("spectrum", "magnitude spectrum of the C_S series");
    auto* fit_cmd = app.add_subcommand("fit", "exponential decoherence-time fit of the C_S series");
    auto* validate_cmd = app.add_subcommand("validate", "check CPTP and state invariants along an evolution");
    auto* preset_cmd = app.add_subcommand("preset", "run a figure preset");
    preset_cmd->add_option("name", f.preset_name, "fig2|fig3|fig4|fig5|fig6")->required();
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        throw DomainError(e.what());
    }

    ExperimentSpec spec;
    if (preset_cmd->parsed()) spec = preset(f.preset_name);
    if (*config_opt) {
        std::ifstream in(f.config_file);
        if (!in) throw IoError("cannot open config file " + f.config_file);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw DomainError("config file " + f.config_file + ": " + e.what());
        }
        spec = spec_from_json(j, spec);
    }

    if (run_cmd->parsed()) spec.mode = Mode::run;
    if (sweep_cmd->parsed()) spec.mode = Mode::sweep;
    if (spectrum_cmd->parsed()) spec.mode = Mode::spectrum;
    if (fit_cmd->parsed()) spec.mode = Mode::fit;
    if (validate_cmd->parsed()) spec.mode = Mode::validate;
    if (preset_cmd->parsed()) {
        spec.mode = Mode::preset;
        spec.preset = f.preset_name;
    }

    AutomatonConfig& a = spec.automaton;
    if (*n_opt) a.n = f.n;
    if (*steps_opt) spec.steps = f.steps;
    if (*theta_opt) a.theta = f.theta;
    if (*phi1_opt) a.phi1 = f.phi1;
    if (*phi2_opt) a.phi2 = f.phi2;
    if (*xi_opt) a.xi = f.xi;
    if (*eta_opt) a.eta = f.eta;
    if (*p_opt) {
        const Reparametrization r = reparametrize(f.p, f.q);
        a.eta = r.eta;
        a.theta = r.theta;
    }
    if (*boundary_opt) a.boundary = boundary_from_string(f.boundary);
    if (*init_opt) a.initial = f.init;
    if (*vacuum_opt) a.vacuum = parse_vacuum(f.vacuum);
    if (*output_opt) spec.output = f.output;
    if (*format_opt) spec.format = format_from_string(f.format);
    if (*jobs_opt) spec.jobs = f.jobs;
    if (*snap_opt) spec.snapshot_every = f.snapshot_every;
    if (*cap_opt) spec.run_cap = f.run_cap;
    if (*input_opt) spec.input = f.input;
    if (*window_opt) spec.spectrum.window = window_from_string(f.window);
    if (*pad_opt) spec.spectrum.pad_to = f.pad_to;
    if (*thr_opt) spec.fit_threshold = f.fit_threshold;
    if (*fit_mode_opt) spec.fit_mode = fit_mode_from_string(f.fit_mode);
    if (*spectra_flag) spec.write_spectra = true;
    if (*grid_opt) {
        for (const auto& g : f.grids) {
            const auto eq = g.find('=');
            if (eq == std::string::npos) throw DomainError("--grid: expected axis=v1,v2,..., got '" + g + "'");
            const std::string axis = g.substr(0, eq);
            spec.sweep[axis] = parse_list(g.substr(eq + 1), "--grid " + axis);
        }
    }
    return spec;
}

} // namespace

ExperimentSpec parse(const std::vector<std::string>& args) {
    try {
        return parse_impl(args);
    } catch (const HelpRequested&) {
        throw DomainError("help requested");
    }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const ExperimentSpec spec = parse_impl(args);
        // data on stdout pushes summaries to stderr
        const bool data_to_stdout =
            spec.output.empty() && spec.mode != Mode::sweep && spec.mode != Mode::preset;
        run_experiment(spec, out, data_to_stdout ? err : out);
        return success;
    } catch (const HelpRequested& h) {
        out << h.text;
        return success;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return io_failure;
    } catch (const DomainError& e) {
        err << "invalid spec: " << e.what() << '\n';
        return invalid_spec;
    } catch (const InvalidStateError& e) {
        err << "numerical invariant violated: " << e.what() << '\n';
        return invariant_violation;
    } catch (const NoDecayError& e) {
        err << "numerical invariant violated: " << e.what() << '\n';
        return invariant_violation;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return io_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace nqca::cli
