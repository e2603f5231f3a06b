#include <iostream>

#include "fmr/cli.hpp"

int main(int argc, char **argv)
{
    return fmr::run_cli(argc, argv, std::cout, std::cerr);
}
