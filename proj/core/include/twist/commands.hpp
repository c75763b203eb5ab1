#pragma once

#include <string>

#include "twist/config.hpp"

namespace twist {

/// Exit codes shared by every subcommand.
enum ExitCode {
    kExitOk = 0,
    kExitConfigError = 1,
    kExitResourceAbort = 2,
    kExitSearchExhausted = 3,
};

struct CmdOptions {
    std::string out_dir_override; // --out beats OUTPUT_DIR beats config
    std::int64_t workers_override = 0;
    std::uint64_t mem_cap_bytes = 0; // 0 = no byte cap
    bool dump_words = false;
};

int cmd_ball(const ExperimentConfig& config, const CmdOptions& options);
int cmd_deadends(const ExperimentConfig& config, const CmdOptions& options);
int cmd_acx(const ExperimentConfig& config, const CmdOptions& options);
int cmd_witness(const ExperimentConfig& config, const CmdOptions& options);
int cmd_constants(const ExperimentConfig& config, const CmdOptions& options);
int cmd_digits(const ExperimentConfig& config, const CmdOptions& options);

/// Loads the config, dispatches, and maps errors to exit codes with a
/// diagnostic on stderr.
int run_command(const std::string& name, const std::string& config_path,
                const CmdOptions& options);

} // namespace twist
