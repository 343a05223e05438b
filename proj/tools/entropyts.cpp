#include <iostream>

#include "entropyts/commands.hpp"

int main(int argc, char** argv)
{
    return entropyts::run_cli(argc, argv, std::cout, std::cerr);
}
