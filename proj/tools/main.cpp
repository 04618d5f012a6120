#include "hydrosim/cli.hpp"

int main(int argc, char** argv) { return hydrosim::run_cli(argc, argv); }
