#include <iostream>

#include "cptheta/cli.hpp"

int main(int argc, char** argv) {
  return cptheta::cli::run(argc, argv, std::cout, std::cerr);
}
