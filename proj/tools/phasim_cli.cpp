#include <iostream>

#include "phasim/harness/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return phasim::harness::cli_dispatch(args, std::cout, std::cerr);
}
