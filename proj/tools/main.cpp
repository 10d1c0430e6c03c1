#include <iostream>
#include <string>
#include <vector>

#include "mvseries/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mvseries::run_command(args, std::cout, std::cerr);
}
