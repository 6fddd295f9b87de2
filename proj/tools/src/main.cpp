#include <iostream>

#include "scales_cli/cli.hpp"

int main(int argc, char** argv) { return scales::cli::run(argc, argv, std::cout, std::cerr); }
