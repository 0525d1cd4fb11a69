#include "degenlab/cli.hpp"

int main(int argc, char** argv) { return degenlab::cli::cli_main(argc, argv); }
