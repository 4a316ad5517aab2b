#include <iostream>

#include "intaff/cli.hpp"

int main(int argc, char** argv) {
  return intaff::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
