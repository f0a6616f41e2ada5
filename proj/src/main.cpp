#include <iostream>

#include "graphictown/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return gtown::run_cli(args, std::cout, std::cerr);
}
