#include <entanglemeter/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return entanglemeter::cli::main_entry(argc, argv, std::cout, std::cerr); }
