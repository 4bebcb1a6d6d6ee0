#include <iostream>

#include "treerep/cli.hpp"

int main(int argc, char** argv) { return treerep::run_cli(argc, argv, std::cout, std::cerr); }
