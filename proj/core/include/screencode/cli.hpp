#pragma once

#include <string>
#include <vector>

namespace screencode {

// Entry point behind the `screencode` binary: subcommands run, eval, synth.
// Returns 0 on success, 1 on usage/config errors, 2 on runtime failures.
int run_command(const std::vector<std::string>& args);
int run_command(int argc, const char* const* argv);

}  // namespace screencode
