#include <iostream>

#include "pulseinterp/cli.hpp"

int main(int argc, char** argv) { return pulseinterp::run_cli(argc, argv, std::cout, std::cerr); }
