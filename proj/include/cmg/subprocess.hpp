#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cmg {

struct ProcessResult {
  int exit_code = -1;       // -1 when killed by a signal
  std::string out;
  std::string err;
};

// Runs argv[0] with the given arguments via fork/exec — no shell involved.
// stdin is /dev/null, or the named file when stdin_path is set. Captures
// stdout and stderr fully. Throws Err::Io if the program cannot be spawned.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::optional<std::string>& stdin_path =
                              std::nullopt);

}  // namespace cmg
