#include <iostream>

#include "factoria/cli.hpp"

int main(int argc, char** argv) {
  return factoria::cli::main_entry(argc, argv, std::cout, std::cerr);
}
