#include <iostream>

#include "joinguard/cli.hpp"

int main(int argc, char** argv) {
    return joinguard::cli::run(argc, argv, std::cout, std::cerr);
}
