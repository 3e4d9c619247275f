#include <iostream>

#include "rankkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rankkit::run_cli(args, std::cout, std::cerr);
}
