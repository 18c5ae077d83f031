#include "hypgas/cli.hpp"

int main(int argc, char** argv) { return hypgas::cli::run(argc, argv); }
