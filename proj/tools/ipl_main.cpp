#include <iostream>
#include <string>
#include <vector>

#include "ipl/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return ipl::run_cli(args, std::cout, std::cerr);
}
