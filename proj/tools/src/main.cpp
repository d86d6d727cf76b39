#include <iostream>

#include "bmo_cli/cli.hpp"

int main(int argc, char** argv) { return bmo::cli::run(argc, argv, std::cout, std::cerr); }
