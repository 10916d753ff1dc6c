#include <iostream>

#include "roadloc/cli.hpp"

int main(int argc, char** argv) {
  return roadloc::run_cli(argc, argv, std::cout, std::cerr);
}
