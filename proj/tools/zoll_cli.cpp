#include <string>
#include <vector>

#include "zoll/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return zoll::cli::run(args);
}
