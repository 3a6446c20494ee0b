#include <iostream>
#include <string>
#include <vector>

#include "shw/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const auto result = shw::cli::run(args);
  auto& stream = result.exit_code == shw::cli::kUsage ? std::cerr : std::cout;
  stream << result.output();
  return result.exit_code;
}
