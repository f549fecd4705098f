#include "contlogic_cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const auto result = contlogic::cli::run(args);
  std::cout << result.out;
  std::cerr << result.err;
  return result.status;
}
