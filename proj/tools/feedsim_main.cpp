#include <iostream>
#include <string>
#include <vector>

#include "feedsim/commands.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return feedsim::cli::run_cli(args, std::cout, std::cerr);
}
