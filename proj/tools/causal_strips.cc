#include "causal_strips/cli.h"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return causal_strips::cli::run(args, std::cout, std::cerr);
}
