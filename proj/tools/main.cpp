#include <iostream>
#include <string>
#include <vector>

#include "p3dc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return p3dc::cli::run(args, std::cout, std::cerr);
}
