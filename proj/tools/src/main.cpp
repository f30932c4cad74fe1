#include <iostream>

#include "dioph_cli/cli.hpp"

int main(int argc, char** argv) { return dioph::cli::run(argc, argv, std::cout, std::cerr); }
