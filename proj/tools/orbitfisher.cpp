#include <iostream>
#include <string>
#include <vector>

#include "orbitfisher/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return orbitfisher::cli::run(args, std::cout, std::cerr);
}
