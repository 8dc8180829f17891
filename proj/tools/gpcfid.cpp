#include <iostream>

#include "gpcfid/cli.hpp"

int main(int argc, char** argv) { return gpcfid::cli::run(argc, argv, std::cout, std::cerr); }
