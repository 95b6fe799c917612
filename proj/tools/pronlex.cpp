#include <iostream>
#include <string>
#include <vector>

#include "pronlex/cli.hpp"

int main(int argc, char* argv[]) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pronlex::run_cli(args, std::cout, std::cerr);
}
