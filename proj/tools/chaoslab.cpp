#include "chaoslab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return chaoslab::cli::main_entry(argc, argv, std::cout, std::cerr); }
