#include "cipherlint/cli.hpp"

int main(int argc, char** argv) { return cipherlint::run_cli(argc, argv); }
