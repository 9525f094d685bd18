#include <iostream>

#include "detsing/cli.hpp"

int main(int argc, char** argv) { return detsing::run_cli(argc, argv, std::cout, std::cerr); }
