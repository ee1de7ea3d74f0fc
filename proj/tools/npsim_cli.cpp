#include <iostream>

#include "npsim/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return npsim::cli_main(args, std::cout, std::cerr);
}
