#include <iostream>

#include "lumikit/cli.hpp"

int main(int argc, char** argv) {
    return lumikit::cli::run(argc, argv, std::cout, std::cerr);
}
