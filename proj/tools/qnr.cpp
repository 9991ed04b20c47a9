#include <iostream>

#include "qnr/cli.hpp"

int main(int argc, char** argv) { return qnr::run_cli(argc, argv, std::cout, std::cerr); }
