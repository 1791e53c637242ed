#include "nldamp/cli.hpp"

int main(int argc, char** argv) { return nldamp::cli::run(argc, argv); }
