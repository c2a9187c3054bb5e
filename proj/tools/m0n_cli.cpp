#include "m0n/cli.hpp"

int main(int argc, char** argv) { return m0n::cli::run(argc, argv); }
