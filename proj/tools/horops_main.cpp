#include "horops/cli.hpp"

int main(int argc, char** argv) { return horops::run_cli(argc, argv); }
