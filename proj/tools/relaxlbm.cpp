/// @file relaxlbm.cpp
/// @brief Command-line executable; all logic lives in relaxlbm::cli.

#include <iostream>
#include <string>
#include <vector>

#include "relaxlbm/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return relaxlbm::cli::run_cli(args, std::cout, std::cerr);
}
