#include <iostream>

#include "radpi/cli.hpp"

int main(int argc, char** argv) {
  return radpi::cli::run(argc, argv, std::cout, std::cerr);
}
