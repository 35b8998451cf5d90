#include <iostream>
#include <string>
#include <vector>

#include "wpcn/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return wpcn::cli::run(args, std::cout, std::cerr);
}
