#include <iostream>

#include "paulisim/cli/commands.hpp"

int main(int argc, char** argv) { return paulisim::cli::main(argc, argv, std::cout, std::cerr); }
