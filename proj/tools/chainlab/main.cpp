#include <iostream>

#include "chainlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return chainlab::cli::run_cli(args, std::cout, std::cerr);
}
