#include <iostream>

#include "distweyl/cli.hpp"

int main(int argc, char** argv) {
  return distweyl::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
