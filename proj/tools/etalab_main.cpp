#include <iostream>
#include "etalab/cli.hpp"

int main(int argc, char** argv) {
    return etalab::cli::run_main(argc, argv, std::cout, std::cerr);
}
