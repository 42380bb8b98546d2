#include <iostream>

#include "fibft/cli.hpp"

int main(int argc, char** argv) { return fibft::cli::run(argc, argv, std::cout, std::cerr); }
