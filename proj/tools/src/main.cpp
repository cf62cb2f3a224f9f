#include <iostream>

#include "soundvi/tools/cli.hpp"

int main(int argc, char** argv) {
    return soundvi::tools::run_cli({argv, argv + argc}, std::cout, std::cerr);
}
