#include "spinsq/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return spinsq::run(argc, argv, std::cout, std::cerr); }
