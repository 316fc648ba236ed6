#include <iostream>

#include "toda_crystal/cli.hpp"

int main(int argc, char** argv) {
  return toda_crystal::run_cli(argc, argv, std::cout, std::cerr);
}
