#include "geomom/cli.hpp"

int main(int argc, char** argv) { return geomom::cli::run_cli(argc, argv); }
