// output.hpp — JSON/CSV serialization of configs, trajectories, spectra,
// and fits. Every written file carries the resolved automaton config.

#pragma once

#include "nqca/experiment.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace nqca {

using json = nlohmann::json;

json to_json(const AutomatonConfig& c);
// Reads the fields present in `j` on top of `base`. Unknown keys and
// ill-typed values raise DomainError naming the field.
AutomatonConfig config_from_json(const json& j, AutomatonConfig base = {});

json to_json(const ExperimentSpec& s);
ExperimentSpec spec_from_json(const json& j, ExperimentSpec base = {});

json to_json(const DecayFit& f);

// Trajectory CSV: '#'-prefixed metadata lines, then the header
// step,c_s,c_1,mean_x,purity,trace_dev and one row per record.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
json trajectory_to_json(const Trajectory& traj);

void write_spectrum_csv(std::ostream& os, const SpectrumResult& s, const json& meta);
json spectrum_to_json(const SpectrumResult& s, const json& meta);

// Renders a double with 17 significant digits.
std::string format_double(double v);

// Writes to a sibling temporary file and renames it into place.
// Throws IoError on failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Reads one named column from a CSV file, skipping '#' lines.
std::vector<double> read_csv_column(const std::filesystem::path& path, const std::string& column);

} // namespace nqca
