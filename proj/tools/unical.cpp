#include <iostream>
#include <string>
#include <vector>

#include "unical/cli.hpp"

int main(int argc, char **argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return unical::cli::run(args, std::cout, std::cerr, unical::cli::environment_from_process());
}
