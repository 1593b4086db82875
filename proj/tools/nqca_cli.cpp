#include "nqca/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return nqca::cli::main_entry(args, std::cout, std::cerr);
}
