#include "polyshell/cli.hpp"

int main(int argc, char** argv) { return polyshell::cli::run(argc, argv); }
