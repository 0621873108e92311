#include <iostream>

#include "mtpoly/cli.hpp"

int main(int argc, char** argv) { return mtpoly::cli_main(argc, argv, std::cout, std::cerr); }
