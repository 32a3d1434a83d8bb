#include "kawahara/cli.hpp"

int main(int argc, char** argv) { return kawahara::run_cli(argc, argv); }
