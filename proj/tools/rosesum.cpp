#include <iostream>
#include <string>
#include <vector>

#include "rosesum/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return rosesum::cli::run(args, std::cout, std::cerr);
}
