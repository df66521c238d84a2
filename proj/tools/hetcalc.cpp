#include <iostream>

#include "hetcalc/cli.hpp"

int main(int argc, char** argv) { return het::run_cli(argc, argv, std::cout, std::cerr); }
