#include <iostream>

#include "kahler/cli.hpp"

int main(int argc, char** argv) {
  return kahler::run_cli(argc, argv, std::cout, std::cerr, std::cin);
}
