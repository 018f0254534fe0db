#include <iostream>
#include <string>
#include <vector>

#include "mixodyn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return mixodyn::parse_and_dispatch(args, std::cout, std::cerr);
}
