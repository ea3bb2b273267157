#include "bergman/cli/commands.hpp"

int main(int argc, char** argv) { return bergman::cli::run_cli(argc, argv); }
