#include <iostream>
#include <string>
#include <vector>

#include "blockgrader/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return blockgrader::run_cli(args, std::cout, std::cerr);
}
