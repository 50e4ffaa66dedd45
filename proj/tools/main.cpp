#include <iostream>

#include "cssdh/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cssdh::cli::dispatch(args, std::cout, std::cerr);
}
