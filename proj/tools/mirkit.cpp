#include <iostream>

#include "mirkit/cli/programs.hpp"

int main(int argc, char** argv) { return mirkit::cli::run_cli(argc, argv, std::cout, std::cerr); }
