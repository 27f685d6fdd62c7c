#include <iostream>

#include "fracground/cli.hpp"

int main(int argc, char** argv) { return fracground::cli::run(argc, argv, std::cout, std::cerr); }
