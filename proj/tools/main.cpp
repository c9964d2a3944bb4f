#include "ph/cli.hpp"

int main(int argc, char** argv) { return ph::run_cli(argc, argv); }
