#include <iostream>

#include "bdheap_tools/cli.hpp"

int main(int argc, char** argv) {
  return bdheap::cli::run(argc, argv, std::cout, std::cerr);
}
