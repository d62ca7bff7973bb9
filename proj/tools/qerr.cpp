#include <iostream>

#include "qerr_cli.hpp"

int main(int argc, char** argv) { return qerr::cli::run_cli(argc, argv, std::cout, std::cerr); }
