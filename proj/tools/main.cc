#include <iostream>

#include "hyperpm/cli.h"

int main(int argc, char** argv) {
  return hyperpm::run_cli(argc, argv, std::cout, std::cerr);
}
