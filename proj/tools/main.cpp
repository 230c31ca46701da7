#include <csignal>
#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::signal(SIGINT, [](int) { rankfarm::cli::stop_serving(); });
  std::signal(SIGTERM, [](int) { rankfarm::cli::stop_serving(); });
  std::vector<std::string> args(argv + 1, argv + argc);
  return rankfarm::cli::run(args, std::cout, std::cerr);
}
