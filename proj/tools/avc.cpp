#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return avc::cli::run(argc, argv, std::cin, std::cout, std::cerr);
}
