#include <iostream>
#include <string>
#include <vector>

#include "rbahp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return rbahp::cli::run(args, std::cout, std::cerr);
}
