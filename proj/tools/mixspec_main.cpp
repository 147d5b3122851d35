#include "mixspec/cli.hpp"

int main(int argc, char** argv) { return mixspec::cli::run(argc, argv); }
