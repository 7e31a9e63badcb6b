#include <iostream>
#include <string>
#include <vector>

#include "surfrep/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return surfrep::cli::run(args, std::cout, std::cerr);
}
