#include <iostream>

#include "ptsmc/cli.hpp"

int main(int argc, char** argv) { return ptsmc::cli::run(argc, argv, std::cout, std::cerr); }
