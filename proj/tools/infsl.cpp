#include <iostream>

#include "infsl/cli.hpp"

int main(int argc, char** argv) { return infsl::run_cli(argc, argv, std::cout, std::cerr); }
