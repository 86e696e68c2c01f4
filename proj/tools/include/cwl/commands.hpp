#pragma once

#include <string>

namespace cwl {

// Runs one experiment command against a JSON config file and writes the
// command's output files into out_dir. Returns the process exit code:
// 0 success, 2 validation failure, 3 numerical failure, 1 I/O or parse
// failure. Never throws; errors are reported on stderr.
int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_dir);

}  // namespace cwl
