#include <iostream>
#include <string>
#include <vector>

#include "oamch/cli.hpp"

int main(int argc, char** argv)
{
    return oamch::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
