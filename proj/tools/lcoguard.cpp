#include <iostream>
#include <string>
#include <vector>

#include "lcoguard/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lcoguard::run_cli(args, std::cout, std::cerr);
}
