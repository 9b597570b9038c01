#include <iostream>
#include <vector>

#include "selfcorrect/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return selfcorrect::run_command(args, std::cout, std::cerr);
}
