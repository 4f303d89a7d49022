#include "swarmsafe/cli.hpp"

int main(int argc, char** argv) { return swarmsafe::cli::main(argc, argv); }
