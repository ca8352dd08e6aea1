#include <iostream>

#include "catdb/cli.hpp"

int main(int argc, char** argv) { return catdb::run_cli(argc, argv, std::cout, std::cerr); }
