#include <iostream>

#include "tvob/io.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tvob::run_command(args, std::cout, std::cerr);
}
