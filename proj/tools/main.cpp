#include <iostream>

#include "bumg/cli.hpp"

int main(int argc, char** argv) { return bumg::cli::run(argc, argv, std::cout, std::cerr); }
