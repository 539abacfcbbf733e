#include <iostream>

#include "polyenc/cli.hpp"

int main(int argc, char** argv) { return polyenc::run_cli(argc, argv, std::cout, std::cerr); }
