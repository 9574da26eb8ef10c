#include <iostream>
#include <string>
#include <vector>

#include "vmfkl/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return vmfkl::cli::run(args, std::cout, std::cerr);
}
