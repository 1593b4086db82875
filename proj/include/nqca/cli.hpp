// cli.hpp — command-line front end for the experiment driver

#pragma once

#include "nqca/experiment.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace nqca::cli {

enum ExitCode : int {
    success = 0,
    invalid_spec = 2,
    invariant_violation = 3,
    io_failure = 4,
};

// Parses arguments (without the program name) into a spec: config file
// first, then flags on top. Throws DomainError on invalid input.
ExperimentSpec parse(const std::vector<std::string>& args);

// Full entry point: parse, run, map exceptions onto exit codes.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace nqca::cli
