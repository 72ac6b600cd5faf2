#include "screencode/cli.hpp"

int main(int argc, char** argv) { return screencode::run_command(argc, argv); }
