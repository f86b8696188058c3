#include <iostream>

#include "doublequad/cli.hpp"

int main(int argc, char** argv) { return dq::cli::cli_main(argc, argv, std::cin, std::cout, std::cerr); }
