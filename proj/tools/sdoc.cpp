#include "sdoc/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return sdoc::run_cli(argc, argv, std::cin, std::cout, std::cerr);
}
