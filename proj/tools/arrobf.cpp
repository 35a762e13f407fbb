// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "arrobf/cli.hpp"

int main(int argc, char** argv)
{
    return arrobf::cli::run(argc, argv, std::cout, std::cerr);
}
