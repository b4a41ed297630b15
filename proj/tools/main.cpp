#include <string>
#include <vector>

#include "infotweet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return infotweet::cli::dispatch(std::move(args));
}
