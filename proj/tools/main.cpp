#include <iostream>

#include "ciarisk/cli.hpp"

int main(int argc, char** argv) {
    return ciarisk::cli::run(argc, argv, std::cout, std::cerr);
}
