#include <iostream>
#include <string>
#include <vector>

#include "stark/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return stark::cli::run(args, std::cout, std::cerr);
}
