#include <iostream>
#include <string>
#include <vector>

#include "snbif/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return snbif::run_cli(args, std::cout, std::cerr);
}
