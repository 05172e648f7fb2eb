#include "qfd/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return qfd::run_cli(argc, argv, std::cout, std::cerr);
}
