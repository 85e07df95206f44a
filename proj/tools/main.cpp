#include <iostream>

#include "cli_lib.hpp"

int main(int argc, char** argv) {
  return quartic::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
