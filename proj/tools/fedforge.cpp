#include <iostream>
#include <vector>

#include "fedforge/cli.hpp"

int main(int argc, char** argv) {
    return fedforge::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout,
                             std::cerr);
}
