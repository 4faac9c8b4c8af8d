#include <iostream>

#include "kashin/commands.hpp"

int main(int argc, char** argv) { return kashin::run_cli(argc, argv, std::cout, std::cerr); }
