#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nflab/config.hpp"

namespace nflab {

const std::vector<std::string>& command_names();

struct CommandOptions {
    std::string trajectory_file = "trajectory.csv";  // simulate only
};

/**
 * Runs one command against a validated config, writing artifacts under
 * cfg.output_dir and a short human summary to `log`.
 *
 * Returns 0 on success and 1 when a hard invariant fails (energy increase,
 * state outside the absorbing ball, failed hypothesis, spectrum mismatch).
 * Convergence shortfalls are logged as warnings and keep exit status 0.
 * Throws std::invalid_argument for an unknown command; other errors are
 * rethrown as std::runtime_error prefixed with the command name.
 */
int run_command(const std::string& cmd, const RunConfig& cfg, std::ostream& log, const CommandOptions& opts = {});

}  // namespace nflab
