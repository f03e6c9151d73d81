#include <iostream>

#include "detnodes/cli.hpp"

int main(int argc, char** argv)
{
    return detnodes::run_cli(argc, argv, std::cout, std::cerr);
}
