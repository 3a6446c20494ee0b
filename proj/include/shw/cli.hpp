#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shw/json_io.hpp"

namespace shw::cli {

enum ExitCode : int {
  kHolds = 0,         ///< every checked property holds
  kFails = 1,         ///< some property fails; the report carries a witness
  kUsage = 2,         ///< usage or input error
  kInconclusive = 3,  ///< a search timed out
};

struct CommandResult {
  int exit_code = kHolds;
  std::string text;             ///< human-readable report
  std::optional<json> payload;  ///< machine-readable report
  bool json_mode = false;       ///< --json was given

  /// What the binary prints: the payload under --json, the text otherwise.
  std::string output() const;
};

/// Runs one command line (without the program name). Never throws: errors
/// become exit code 2 with a message and the usage text.
CommandResult run(const std::vector<std::string>& args);

}  // namespace shw::cli
