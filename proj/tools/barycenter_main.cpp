#include "bary/cli.hpp"

int main(int argc, char** argv) { return bary::cli::run(argc, argv); }
