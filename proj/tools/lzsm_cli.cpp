#include "lzsm/cli.hpp"

int main(int argc, char** argv) { return lzsm::cli::run_cli(argc, argv); }
