#include <iostream>

#include "plankline/cli.hpp"

int main(int argc, char** argv) {
  plankline::CommandSpec spec;
  if (auto code = plankline::parse_command_line(argc, argv, spec, std::cout, std::cerr)) return *code;
  return plankline::run(spec, std::cout, std::cerr);
}
