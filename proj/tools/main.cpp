#include <iostream>

#include "dproj/cli.hpp"

int main(int argc, char** argv) { return dproj::run_cli(argc, argv, std::cout, std::cerr); }
