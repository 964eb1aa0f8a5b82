#include "sslbench/cli.hpp"

int main(int argc, char** argv) { return sslbench::cli_main(argc, argv); }
