#include <iostream>

#include "resil/cli.hpp"

int main(int argc, char** argv) { return resil::cli::run(argc, argv, std::cout, std::cerr); }
