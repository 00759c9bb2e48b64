#include <string>
#include <vector>

#include "byztree/cli_app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return byztree::run_cli(args);
}
