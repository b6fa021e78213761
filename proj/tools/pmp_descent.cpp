#include <iostream>
#include <string>
#include <vector>

#include "pmpd/cli/runner.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return pmpd::cli::run_main(args, std::cout, std::cerr);
}
