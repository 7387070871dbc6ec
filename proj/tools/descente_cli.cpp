#include <iostream>

#include "descente/cli.hpp"

int main(int argc, char** argv) { return descente::run_cli(argc, argv, std::cout, std::cerr); }
