#include <iostream>

#include "girg/cli.hpp"

int main(int argc, char** argv) { return girg::run_cli(argc, argv, std::cout, std::cerr); }
