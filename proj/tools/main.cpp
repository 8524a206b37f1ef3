#include <iostream>

#include "periodfn/cli.hpp"

int main(int argc, char** argv) { return periodfn::cli::run_cli(argc, argv, std::cout, std::cerr); }
