#include <iostream>

#include "idealcalc/cli.hpp"

int main(int argc, char** argv) {
  return idealcalc::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
