#include "mover/cli.hpp"

#include <iostream>

int main( int argc, char** argv ) { return mover::run_cli( argc, argv, std::cout, std::cerr ); }
