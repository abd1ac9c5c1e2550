#include <iostream>

#include "sombrero/cli.hpp"

int main(int argc, char** argv) { return sombrero::cli::run(argc, argv, std::cout, std::cerr); }
