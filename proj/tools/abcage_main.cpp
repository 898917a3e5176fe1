#include <iostream>

#include "abcage/cli/commands.hpp"

int main(int argc, char** argv) { return abcage::cli::run_cli(argc, argv, std::cout, std::cerr); }
