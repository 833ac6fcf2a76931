#include "bandgrid/cli.hpp"

int main(int argc, char** argv) { return bandgrid::run_cli(argc, argv); }
