#include <iostream>
#include <string>
#include <vector>

#include "amelu/cli.hpp"

int main(int argc, char** argv) {
  return amelu::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
