#include <iostream>

#include "nondecomp/harness.hpp"

int main(int argc, char **argv) {
    return nondecomp::run_cli(argc, argv, std::cout, std::cerr);
}
