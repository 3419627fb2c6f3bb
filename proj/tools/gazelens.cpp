#include "gazelens/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return gazelens::run_cli(argc, argv, std::cout, std::cerr); }
