#include <iostream>
#include <string>
#include <vector>

#include "qwp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qwp::runCli(std::move(args), std::cout);
}
