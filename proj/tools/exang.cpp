#include <iostream>

#include "exang/cli/cli.hpp"

int main(int argc, char** argv) { return exang::cli::run(argc, argv, std::cout, std::cerr); }
