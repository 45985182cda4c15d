#include <iostream>

#include "dgatk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dgatk::run(args, std::cout, std::cerr);
}
