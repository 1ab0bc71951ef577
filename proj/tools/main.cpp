#include "ppir/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ppir::cli::run(argc, argv, std::cout, std::cerr); }
