#include <iostream>

#include "countlab/cli.hpp"

int main(int argc, char** argv) {
  return countlab::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
