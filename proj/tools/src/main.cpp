#include "cgabor_cli/commands.hpp"

int main(int argc, char** argv) { return cgabor::cli::run_cli(argc, argv); }
