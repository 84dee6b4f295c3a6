// commands.hpp - CLI commands as library calls.
//
// Each command writes <stem>.csv, <stem>.meta.json and config.resolved.json
// into the output directory. Files carry no timestamps or thread counts, so
// identical inputs give byte-identical outputs.

#pragma once

#include "qswap/config.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qswap::commands {

enum ExitCode : int { kSuccess = 0, kConfigFailure = 1, kNumericFailure = 2 };

struct CommandOptions {
    std::string out_dir;  // empty: use the config's "output" entry
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

const std::vector<std::string>& command_names();

// Runs the command, writing progress and errors to log. Config and domain
// errors give kConfigFailure, numerical breakdowns kNumericFailure.
int run_command(const std::string& name, const config::RunConfig& cfg, const CommandOptions& opt,
                std::ostream& log);

// Loads the config file first; a bad file gives kConfigFailure.
int run_command_file(const std::string& name, const std::string& config_path, const CommandOptions& opt,
                     std::ostream& log);

// 17 significant digits.
std::string format_number(double v);

} // namespace qswap::commands
