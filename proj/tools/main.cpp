#include <iostream>

#include "optday/cli.hpp"

int main(int argc, char** argv) { return optday::run_cli(argc, argv, std::cout, std::cerr); }
