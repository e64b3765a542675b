#include <iostream>

#include "shiftdim/cli.hpp"

int main(int argc, char** argv) { return shiftdim::cli::run(argc, argv, std::cout, std::cerr); }
