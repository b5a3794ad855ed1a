#include <iostream>

#include "ptolemy/cli.hpp"

int main(int argc, char** argv) {
  return ptolemy::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cin, std::cout, std::cerr);
}
