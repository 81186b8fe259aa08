#include "kbott/cli.hpp"

int main(int argc, char** argv) { return kbott::cli_main(argc, argv); }
