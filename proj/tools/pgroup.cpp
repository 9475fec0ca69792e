#include "pgroup/cli.hpp"

int main(int argc, char** argv) { return pgroup::cli_main(argc, argv); }
