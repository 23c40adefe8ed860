#include <iostream>

#include "hexwalk/cli.hpp"

int main(int argc, char** argv) { return hexwalk::run_cli(argc, argv, std::cout, std::cerr); }
