#include <iostream>
#include <string>
#include <vector>

#include "iplab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return iplab::run_cli(args, std::cout, std::cerr);
}
