#include <iostream>

#include "schubart/cli.hpp"

int main(int argc, char** argv) { return schubart::cli::run(argc, argv, std::cout, std::cerr); }
