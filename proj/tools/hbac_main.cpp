#include <iostream>
#include <string>
#include <vector>

#include "hbac/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hbac::cli::run(args, std::cout, std::cerr);
}
