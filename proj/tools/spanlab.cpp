#include <iostream>

#include "spanlab/cli.hpp"

int main(int argc, char** argv) { return spanlab::run_command(argc, argv, std::cout, std::cerr); }
