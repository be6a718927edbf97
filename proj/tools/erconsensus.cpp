#include <iostream>
#include <string>
#include <vector>

#include "erconsensus/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return erc::cli::run(args, std::cout, std::cerr);
}
