#include <iostream>

#include "suctiongrip/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return suctiongrip::run_cli(args, std::cout, std::cerr);
}
