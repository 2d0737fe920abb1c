#include <iostream>

#include "pentaks_cli.hpp"

int main(int argc, char** argv) { return pentaks::cli::dispatch(argc, argv, std::cout, std::cerr); }
