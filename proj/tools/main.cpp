#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return camdp::cli::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
