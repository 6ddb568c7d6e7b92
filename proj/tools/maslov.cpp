#include "maslov/cli.hpp"

int main(int argc, char** argv) { return maslov::run_cli(argc, argv); }
