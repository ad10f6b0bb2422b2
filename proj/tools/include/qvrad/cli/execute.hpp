#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qvrad/cli/config.hpp"

namespace qvrad::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,  // sweep verdict or validate self-test failed
    exit_config = 2,
    exit_module = 3,
};

struct RunResult
{
    int exit_code = exit_ok;
    std::vector<std::string> files;  // names relative to the output directory
};

//! Runs the configured command and writes its artifacts into `out_dir`.
//! Module errors are caught and written to error.json.
RunResult execute(RunConfig const& config, std::filesystem::path const& out_dir);

//! Writes error.json for failures that happen before a config exists.
void write_error(std::filesystem::path const& out_dir, std::string const& code,
                 std::string const& message, std::string const& hash = {});

}  // namespace qvrad::cli
