#include <iostream>
#include <string>
#include <vector>

#include "matvar/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return matvar::cli::run(std::move(args), std::cout, std::cerr);
}
