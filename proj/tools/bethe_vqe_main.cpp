#include <iostream>

#include "bethe_vqe/cli/commands.hpp"

int main(int argc, char** argv) { return bethe_vqe::cli::run(argc, argv, std::cout, std::cerr); }
