#include <iostream>

#include "qanova/cli.hpp"

int main(int argc, char** argv) { return qanova::cli::run(argc, argv, std::cout, std::cerr); }
