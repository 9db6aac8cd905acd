#include <iostream>

#include "kron/cli.hpp"

int main(int argc, char** argv) { return kron::run_cli(argc, argv, std::cout, std::cerr); }
