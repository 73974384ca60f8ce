#include <iostream>
#include <string>
#include <vector>

#include "pipeline.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return szl::cli::run(args, std::cout, std::cerr);
}
