#include <iostream>

#include "shorn/cli.hpp"

int main(int argc, char** argv) { return shorn::cli::run(argc, argv, std::cout, std::cerr); }
