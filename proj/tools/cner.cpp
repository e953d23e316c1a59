#include <iostream>

#include "cner/cli/commands.h"

int main(int argc, char** argv) {
  return cner::cli::run_cli(argc, argv, std::cin, std::cout, std::cerr);
}
