#include "exitwalk/cli.hpp"

int main(int argc, char** argv) { return exitwalk::cli::main(argc, argv); }
