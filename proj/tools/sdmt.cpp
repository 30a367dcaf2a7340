#include <iostream>
#include <string>
#include <vector>

#include "sdmt/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sdmt::run_cli(args, std::cout, std::cerr);
}
