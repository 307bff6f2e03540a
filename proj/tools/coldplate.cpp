#include <iostream>

#include "coldplate/cli.hpp"

int main(int argc, char** argv) { return coldplate::cli::run(argc, argv, std::cout, std::cerr); }
