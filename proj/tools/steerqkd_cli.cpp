#include <iostream>

#include "steerqkd/cli.hpp"

int main(int argc, char **argv) {
    return steerqkd::cli::run(argc, argv, std::cout, std::cerr);
}
