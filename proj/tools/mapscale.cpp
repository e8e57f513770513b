#include "mapscale/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return mapscale::cli::run(argc, argv, std::cout, std::cerr); }
