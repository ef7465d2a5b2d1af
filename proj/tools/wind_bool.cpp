#include <iostream>

#include "windbool/cli.hpp"

int main(int argc, char** argv) { return windbool::cli::run(argc, argv, std::cout, std::cerr); }
