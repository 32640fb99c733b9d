#include <iostream>

#include "critsweep/cli.hpp"

int main(int argc, char** argv) {
    return critsweep::cli::main_entry(argc, argv, std::cout, std::cerr);
}
