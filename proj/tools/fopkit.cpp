#include <iostream>

#include "fopkit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fopkit::run_cli(args, std::cout, std::cerr);
}
