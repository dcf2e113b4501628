#include <string>
#include <vector>

#include "isoprof/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return isoprof::run_cli(args);
}
