#include <iostream>

#include "knotdist/cli.hpp"

int main(int argc, char** argv) { return knotdist::run_cli(argc, argv, std::cout, std::cerr); }
