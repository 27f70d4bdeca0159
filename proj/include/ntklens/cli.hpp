#pragma once

#include "ntklens/config.hpp"

#include <string>

namespace ntklens {

// Runs one subcommand against a resolved config. Returns the process exit
// code: 0 ok, 2 config error, 3 numeric divergence, 4 unsupported feature.
// Error text goes to stderr.
int run_command(const std::string &command, const KeyValueConfig &config);

// Full argv front end (subcommand + --config/--out/--seed/--threads).
int run_cli(int argc, const char *const *argv);

} // namespace ntklens
