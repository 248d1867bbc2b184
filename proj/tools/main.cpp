#include "vulnseed/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return vulnseed::run_cli(argc, argv, std::cout, std::cerr);
}
