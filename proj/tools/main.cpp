#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return lp01::cli::main(argc, argv, std::cin, std::cout, std::cerr); }
