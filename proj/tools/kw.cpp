#include <kw/cli.hpp>

#include <iostream>

int main(int argc, char **argv) { return kw::cli::run(argc, argv, std::cout); }
