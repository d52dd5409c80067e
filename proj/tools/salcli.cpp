#include <iostream>

#include "sal/cli.hpp"

int main(int argc, char** argv) { return sal::run_cli(argc, argv, std::cout, std::cerr); }
