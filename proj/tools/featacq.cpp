#include "featacq/cli.hpp"

int main(int argc, char** argv) { return featacq::cli_main(argc, argv); }
