#include "carleman/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return carleman::cli::main_entry(argc, argv, std::cout, std::cerr); }
