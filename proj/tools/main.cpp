#include <iostream>
#include <string>
#include <vector>

#include "satsim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return satsim::cli::run(args, std::cout, std::cerr);
}
