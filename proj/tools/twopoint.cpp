#include <iostream>

#include "twopoint/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return twopoint::cli::run(args, std::cout);
}
