#include <iostream>
#include <string>
#include <vector>

#include "smc/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return smc::run_cli(args, std::cout, std::cerr);
}
