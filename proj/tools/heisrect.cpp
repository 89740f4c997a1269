#include <iostream>
#include <string>
#include <vector>

#include "heisrect/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return heisrect::cli_main(args, std::cerr);
}
