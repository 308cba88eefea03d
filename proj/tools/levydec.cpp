#include <iostream>

#include "levydec/cli.hpp"

int main(int argc, char** argv) { return levydec::cli::run_cli(argc, argv, std::cout, std::cerr); }
