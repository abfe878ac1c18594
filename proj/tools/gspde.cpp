#include "gspde/cli_runner.hpp"

int main(int argc, char** argv) { return gspde::run_cli(argc, argv); }
