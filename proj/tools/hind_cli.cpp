#include "hind/cli.hpp"

int main(int argc, char** argv) { return hind::run_cli(argc, argv); }
